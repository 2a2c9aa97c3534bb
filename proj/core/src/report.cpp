#include "qtrans/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qtrans {

Json defaults_to_json() {
  return Json{{"version", Defaults::version},
              {"p_exp", Defaults::p_exp},
              {"B", Defaults::B},
              {"eta0", Defaults::eta0},
              {"taylor_C", Defaults::taylor_C},
              {"eps_margin", Defaults::eps_margin},
              {"gamma_accept", Defaults::gamma_accept},
              {"eta_floor", Defaults::eta_floor},
              {"perturb_budget", Defaults::perturb_budget},
              {"A_n1", Defaults::A(1)},
              {"A_n2", Defaults::A(2)},
              {"D_n1", Defaults::D(1)},
              {"D_n2", Defaults::D(2)},
              {"density_n1", Defaults::density(1)},
              {"density_n2", Defaults::density(2)}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void render(const Json& j, std::string& out, int indent) {
  const std::string pad(2 * indent, ' ');
  const std::string pad1(2 * (indent + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        out += Json(it.key()).dump();
        out += ": ";
        render(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        render(v, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string render_report(const Json& j) {
  std::string out;
  render(j, out, 0);
  out += "\n";
  return out;
}

Json make_report(const std::string& tool, const Json& config_echo, const Json& payload) {
  return Json{{"tool", tool},
              {"version", "0.1.0"},
              {"defaults", defaults_to_json()},
              {"config", config_echo},
              {"payload", payload}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("write_file: cannot open " + path);
  f << content;
  if (!f) throw DomainError("write_file: write failed for " + path);
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += header[i];
  }
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

Json to_json(const PerturbationCertificate& c) {
  Json rej = Json::array();
  for (const auto& r : c.rejections)
    rej.push_back(Json{{"index", r.index},
                       {"radius", r.radius},
                       {"screened_min", r.screened_min},
                       {"certified_run", r.certified_run},
                       {"bound", r.bound}});
  return Json{{"w", point_to_json(Point(c.w.begin(), c.w.end()))},
              {"w_norm", c.w_norm},
              {"allowed_radius", c.allowed_radius},
              {"eta", c.eta},
              {"p_exp", c.p_exp},
              {"certificate", to_json(c.cert)},
              {"candidates_tried", c.candidates_tried},
              {"accepted_index", c.accepted_index},
              {"sup_bound_measured", c.sup_bound_measured},
              {"fdist_min_grid", c.fdist_min_grid},
              {"taylor_tail", c.taylor_tail},
              {"taylor_degree", c.taylor_degree},
              {"rejections", std::move(rej)}};
}

Json to_json(const Schedule& s) {
  return Json{{"p_exp", s.p_exp},       {"A", s.A},
              {"B", s.B},               {"D", s.D},
              {"M", s.M},               {"floor", s.floor},
              {"eta", s.eta},           {"eta_eff", s.eta_eff},
              {"key_inequality_ok", s.key_inequality_ok},
              {"selection_inequality_holds", s.selection_inequality_holds()}};
}

Json to_json(const ConstructionReport& r, bool include_points) {
  Json per_color = Json::array();
  for (const auto& c : r.per_color)
    per_color.push_back(Json{{"color", c.color},
                             {"eta", c.eta},
                             {"eta_eff", c.eta_eff},
                             {"tau", c.tau},
                             {"cap", c.cap},
                             {"worst_round_bound", c.worst_round_bound},
                             {"points", c.points}});
  Json out{{"n", r.n},
           {"k", r.k},
           {"seed", r.seed},
           {"model", "flat Bargmann-Fock, phi = |z|^2 - 1, exact peak sections"},
           {"schedule", to_json(r.schedule)},
           {"net_size", r.net_size},
           {"colors_used", r.colors_used},
           {"covering_radius", r.covering_radius},
           {"per_color", std::move(per_color)},
           {"patch_rho", r.patch_rho},
           {"cover_upper", r.cover_upper},
           {"bookkeeping_bound", r.bookkeeping_bound},
           {"final_pass_bound", r.final_pass_bound},
           {"direct_bound", r.direct_bound},
           {"global_bound", r.global_bound},
           {"measured_min", r.measured_min},
           {"sup_measured", r.sup_measured},
           {"sup_after_normalization", r.sup_after_normalization},
           {"sup_certified_upper", r.sup_certified_upper},
           {"normalization", r.normalization},
           {"wall_vs_sphere", r.wall_vs_sphere},
           {"wall_slack_within_tenth", r.wall_slack_within_tenth},
           {"completed", r.completed}};
  if (include_points) {
    Json pts = Json::array();
    for (const auto& p : r.points)
      pts.push_back(Json{{"net_index", p.net_index},
                         {"color", p.color},
                         {"w", point_to_json(Point(p.w.begin(), p.w.end()))},
                         {"tau", p.tau},
                         {"cap", p.cap},
                         {"round_bound", p.round_bound},
                         {"degradation", p.degradation},
                         {"bookkeeping_bound", p.bookkeeping_bound},
                         {"final_bound", p.final_bound},
                         {"candidates", p.candidates},
                         {"quotient_sup", p.quotient_sup},
                         {"tail_slack", p.tail_slack}});
    out["points"] = std::move(pts);
  }
  return out;
}

Json to_json(const TubeEstimate& t) {
  return Json{{"eps", t.eps},
              {"samples", t.samples},
              {"hits", t.hits},
              {"descent_failures", t.descent_failures},
              {"estimate", t.estimate},
              {"ci_halfwidth", t.ci_halfwidth}};
}

Json to_json(const RealPoly& p) {
  Json terms = Json::array();
  for (const auto& [a, c] : p.terms())
    terms.push_back(Json{{"alpha", a.e}, {"c", c}});
  return Json{{"n", p.dim()}, {"terms", std::move(terms)}};
}

RealPoly real_poly_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  RealPoly p(n);
  for (const auto& t : j.at("terms")) {
    MultiIndex a(n);
    const auto& alpha = t.at("alpha");
    if (static_cast<int>(alpha.size()) != n)
      throw DomainError("real_poly_from_json: alpha length mismatch");
    for (int i = 0; i < n; ++i) a.e[i] = alpha[i].get<std::uint32_t>();
    p.add_coefficient(a, t.at("c").get<double>());
  }
  return p;
}

Json to_json(const ContainmentWitness& w) {
  return Json{{"G", to_json(w.G)},
              {"degree_bound", w.degree_bound},
              {"residual", w.residual},
              {"smallest_singular", w.smallest_singular},
              {"dimension_count_ok", w.dimension_count_ok}};
}

Json to_json(const LefschetzWord& w) {
  Json cycles = Json::array();
  for (const auto& c : w.cycles) cycles.push_back(c.letters());
  return Json{{"rank", w.rank}, {"cycles", std::move(cycles)}};
}

LefschetzWord lefschetz_word_from_json(const Json& j) {
  const int rank = j.at("rank").get<int>();
  std::vector<std::vector<int>> cycles;
  for (const auto& c : j.at("cycles")) cycles.push_back(c.get<std::vector<int>>());
  return make_lefschetz_word(rank, cycles);
}

Json to_json(const LogDerivativeDiagnostic& d) {
  return Json{{"floor", d.floor},
              {"probed", d.probed},
              {"skipped_below_floor", d.skipped_below_floor},
              {"sup", d.sup},
              {"sup_normalized", d.sup_normalized},
              {"empty_region", d.empty_region}};
}

}  // namespace qtrans
