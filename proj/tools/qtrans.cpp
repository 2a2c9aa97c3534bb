// qtrans: certified quantitative-transversality toolbox (flat model).
//
// Subcommands: perturb, wongkew, containment, net, color, donaldson, moves,
// diag. Every run reads a JSON config, writes the report JSON to --out (and
// CSV side-outputs to --csv), and prints a one-line summary on stdout.
// Exit codes: 0 success, 1 structured mathematical failure, 2 config error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qtrans/bounds.hpp"
#include "qtrans/report.hpp"
#include "qtrans/rng.hpp"

namespace qt = qtrans;
using qt::Json;

namespace {

Json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw qt::DomainError("cannot open config file: " + path);
  Json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw qt::DomainError(std::string("config parse error: ") + e.what());
  }
  return j;
}

struct Outputs {
  std::string out_path;
  std::string csv_path;
};

void emit(const Outputs& o, const std::string& tool, const Json& config, const Json& payload,
          const std::string& summary,
          const std::vector<std::string>& csv_header = {},
          const std::vector<std::vector<std::string>>& csv_rows = {}) {
  Json report = qt::make_report(tool, config, payload);
  const std::string text = qt::render_report(report);
  if (!o.out_path.empty())
    qt::write_file(o.out_path, text);
  else
    std::cout << text;
  if (!o.csv_path.empty() && !csv_header.empty())
    qt::write_file(o.csv_path, qt::render_csv(csv_header, csv_rows));
  std::cout << summary << "\n";
}

std::uint64_t config_seed(const Json& cfg, std::uint64_t flag_seed, bool flag_set) {
  if (flag_set) return flag_seed;
  if (cfg.contains("seed")) return cfg["seed"].get<std::uint64_t>();
  return 0;
}

qt::ExpAffinePoly parse_function(const Json& j) {
  if (j.contains("terms") && !j["terms"].empty() && j["terms"][0].contains("lambda"))
    return qt::exp_affine_from_json(j);
  return qt::ExpAffinePoly::from_poly(qt::holo_poly_from_json(j));
}

int run_perturb(const Json& cfg, std::uint64_t seed, const Outputs& o) {
  qt::PerturbationProblem prob;
  if (cfg.contains("f"))
    prob.f = parse_function(cfg.at("f"));
  else if (cfg.contains("random_f"))
    prob.f = qt::ExpAffinePoly::from_poly(qt::random_polynomial(
        cfg["random_f"].value("n", 2), cfg["random_f"].value("degree", 4), 1.0,
        cfg["random_f"].value("seed", 0ULL)));
  else
    throw qt::DomainError("perturb: config needs \"f\" or \"random_f\"");
  prob.eta = cfg.value("eta", 0.1);
  prob.p_exp = cfg.value("p_exp", qt::Defaults::p_exp);
  prob.eps = cfg.value("eps", qt::Defaults::eps_margin);
  prob.budget = cfg.value("budget", qt::Defaults::perturb_budget);
  prob.radius_cap = cfg.value("radius_cap", 0.0);
  prob.allow_large_sup = cfg.value("allow_large_sup", false);
  prob.seed = seed;

  qt::PerturbationCertificate cert = qt::find_perturbation(prob);
  std::ostringstream sum;
  sum << "perturb: accepted candidate " << cert.accepted_index << " with |w| = " << cert.w_norm
      << ", certified transversality " << cert.cert.bound << " > eta = " << cert.eta;
  emit(o, "perturb", cfg, qt::to_json(cert), sum.str());
  return 0;
}

int run_wongkew(const Json& cfg, std::uint64_t seed, const Outputs& o) {
  std::vector<double> eps_list = cfg.value("eps_list", std::vector<double>{0.1, 0.05, 0.02, 0.01});
  const long samples = cfg.value("samples", 100000L);

  std::vector<std::pair<int, qt::VarietySpec>> varieties;
  if (cfg.contains("polys")) {
    qt::VarietySpec X;
    X.n = cfg.value("n", 2);
    for (const auto& pj : cfg.at("polys")) X.polys.push_back(qt::real_poly_from_json(pj));
    for (const auto& g : X.polys) X.degree = std::max(X.degree, g.degree());
    X.codim = cfg.value("codim", static_cast<int>(X.polys.size()));
    varieties.emplace_back(X.degree, std::move(X));
  } else {
    // seeded random hypersurfaces in [0,1]^2 with a guaranteed zero inside
    std::vector<int> d_list = cfg.value("d_list", std::vector<int>{1, 2, 3, 4, 5});
    for (int d : d_list) {
      qt::VarietySpec X;
      X.n = 2;
      X.degree = d;
      X.codim = 1;
      qt::Rng rng(seed ^ (0xabcdULL + d), 3);
      qt::RealPoly g(2);
      qt::MultiIndex a(2);
      for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j) {
          a.e[0] = i;
          a.e[1] = j;
          g.add_coefficient(a, rng.normal());
        }
      std::vector<double> x0;
      x0.push_back(0.2 + 0.6 * rng.uniform());
      x0.push_back(0.2 + 0.6 * rng.uniform());
      g.add_coefficient(qt::MultiIndex(2), -g.evaluate(x0));
      X.polys.push_back(std::move(g));
      varieties.emplace_back(d, std::move(X));
    }
  }

  Json runs = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& [d, X] : varieties)
    for (double eps : eps_list) {
      qt::TubeEstimate est = qt::tube_volume(X, eps, samples, seed);
      Json r = qt::to_json(est);
      r["d"] = d;
      runs.push_back(std::move(r));
      rows.push_back({std::to_string(d), qt::format_double(eps), qt::format_double(est.estimate),
                      qt::format_double(est.ci_halfwidth), std::to_string(est.descent_failures)});
    }
  std::ostringstream sum;
  sum << "wongkew: " << runs.size() << " tube-volume estimates at " << samples << " samples";
  emit(o, "wongkew", cfg, Json{{"runs", std::move(runs)}}, sum.str(),
       {"d", "eps", "estimate", "ci", "misses"}, rows);
  return 0;
}

int run_containment(const Json& cfg, std::uint64_t, const Outputs& o) {
  std::vector<qt::RealPoly> F;
  for (const auto& pj : cfg.at("F")) F.push_back(qt::real_poly_from_json(pj));
  if (F.empty()) throw qt::DomainError("containment: empty map");
  int d = 1;
  for (const auto& f : F) d = std::max(d, f.degree());
  const int n = F[0].dim();
  const int m = static_cast<int>(F.size());
  int D = cfg.value("D", 0);
  if (D <= 0) D = qt::auroux_degree_bound(n, m, d);
  qt::ContainmentWitness w = qt::containment_hypersurface(F, D);
  std::ostringstream sum;
  sum << "containment: deg G <= " << w.degree_bound << ", residual " << w.residual;
  emit(o, "containment", cfg, qt::to_json(w), sum.str());
  return 0;
}

qt::HypersurfaceModel parse_model(const Json& j) {
  const std::string type = j.value("type", "sphere");
  if (type == "wall") return qt::WallModel{j.value("n", 2), j.value("radius", 1.0)};
  if (type == "sphere") return qt::SphereModel{j.value("n", 1), j.value("k", 100.0)};
  throw qt::DomainError("model type must be wall or sphere");
}

int run_net(const Json& cfg, std::uint64_t seed, const Outputs& o, bool with_coloring) {
  qt::HypersurfaceModel model = parse_model(cfg.value("model", Json{{"type", "sphere"}}));
  const double density = cfg.value("density", 4.0);
  const double separation = cfg.value("separation", 1.0);
  const double D = cfg.value("D", 4.0);

  qt::MetricCloud cloud(model, density, seed);
  qt::Net net = qt::greedy_net(cloud, separation);
  const bool sep_ok = qt::verify_separated(net.points, separation, cloud.dk_scale());
  const bool max_ok = qt::verify_maximal(net, cloud);
  const double cover = qt::covering_radius(net, cloud);

  Json payload{{"N", static_cast<long>(net.points.size())},
               {"separation", separation},
               {"covering_radius", cover},
               {"cloud_size", cloud.size()},
               {"separations_verified", sep_ok && max_ok}};
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  const int n = qt::model_dim(model);

  qt::Coloring col;
  if (with_coloring) {
    col = qt::greedy_coloring(net, D, cloud.dk_scale());
    payload["M"] = col.num_colors;
    payload["D"] = D;
    payload["coloring_verified"] = qt::verify_coloring(net, col, cloud.dk_scale());
  }

  header.push_back("index");
  for (int i = 0; i < n; ++i) {
    header.push_back("re" + std::to_string(i + 1));
    header.push_back("im" + std::to_string(i + 1));
  }
  if (with_coloring) header.push_back("color");
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (int c = 0; c < n; ++c) {
      row.push_back(qt::format_double(net.points[i][c].real()));
      row.push_back(qt::format_double(net.points[i][c].imag()));
    }
    if (with_coloring) row.push_back(std::to_string(col.color[i]));
    rows.push_back(std::move(row));
  }

  std::ostringstream sum;
  sum << (with_coloring ? "color" : "net") << ": N = " << net.points.size();
  if (with_coloring) sum << ", M = " << col.num_colors;
  sum << ", verified = " << ((sep_ok && max_ok) ? "true" : "false");
  emit(o, with_coloring ? "color" : "net", cfg, payload, sum.str(), header, rows);
  return 0;
}

qt::ConstructConfig parse_construct_config(const Json& cfg, std::uint64_t seed) {
  qt::ConstructConfig c;
  c.n = cfg.value("n", 1);
  c.k = cfg.value("k", 100.0);
  c.p_exp = cfg.value("p_exponent", qt::Defaults::p_exp);
  c.A = cfg.value("A", 0.0);
  c.B = cfg.value("B", qt::Defaults::B);
  c.D = cfg.value("D", 0.0);
  c.eta_floor = cfg.value("eta_floor", qt::Defaults::eta_floor);
  c.gamma_accept = cfg.value("gamma_accept", qt::Defaults::gamma_accept);
  c.density = cfg.value("density", 0.0);
  if (cfg.contains("budgets")) {
    c.candidate_budget = cfg["budgets"].value("candidates", c.candidate_budget);
    c.sphere_samples = cfg["budgets"].value("sphere_samples", c.sphere_samples);
    c.spot_checks = cfg["budgets"].value("spot_checks", c.spot_checks);
  }
  c.force_single_point = cfg.value("force_single_point", false);
  c.seed = seed;
  return c;
}

int run_donaldson(const Json& cfg, std::uint64_t seed, const Outputs& o) {
  qt::ConstructConfig c = parse_construct_config(cfg, seed);
  qt::ConstructionReport rep = qt::donaldson_construct(c);
  std::vector<std::vector<std::string>> rows;
  for (const auto& cs : rep.per_color)
    rows.push_back({std::to_string(cs.color), qt::format_double(cs.eta),
                    qt::format_double(cs.worst_round_bound)});
  std::ostringstream sum;
  sum << "donaldson: N = " << rep.net_size << ", M = " << rep.colors_used
      << ", certified eta = " << rep.global_bound << ", sup = " << rep.sup_after_normalization;
  emit(o, "donaldson", cfg, qt::to_json(rep), sum.str(),
       {"color", "eta", "worst_ball_bound"}, rows);
  return 0;
}

int run_moves(const Json& cfg, std::uint64_t, const Outputs& o) {
  qt::LefschetzWord w = qt::lefschetz_word_from_json(cfg.at("word"));
  qt::Monodromy before = qt::total_monodromy(w);
  Json script_log = Json::array();
  if (cfg.contains("script"))
    for (const auto& step : cfg.at("script")) {
      const std::string move = step.at("move").get<std::string>();
      if (move == "hurwitz_left")
        w = qt::hurwitz_left(w, step.at("i").get<int>());
      else if (move == "hurwitz_right")
        w = qt::hurwitz_right(w, step.at("i").get<int>());
      else if (move == "cyclic")
        w = qt::cyclic_permute(w);
      else if (move == "cyclic_inverse")
        w = qt::cyclic_permute_inverse(w);
      else if (move == "stabilize")
        w = qt::stabilize(w, qt::FreeWord(w.rank + 1, step.at("cycle").get<std::vector<int>>()));
      else if (move == "destabilize")
        w = qt::destabilize(w);
      else
        throw qt::DomainError("moves: unknown move " + move);
      script_log.push_back(step);
    }
  qt::Monodromy after = qt::total_monodromy(w);
  Json payload{{"word", qt::to_json(w)},
               {"script", std::move(script_log)},
               {"product_before", before.product.letters()},
               {"product_after", after.product.letters()},
               {"class_representative", after.class_representative.letters()},
               {"product_preserved", before.product == after.product}};
  std::ostringstream sum;
  sum << "moves: m = " << w.size() << ", rank = " << w.rank
      << ", product length = " << after.product.length();
  emit(o, "moves", cfg, payload, sum.str());
  return 0;
}

int run_diag(const Json& cfg, std::uint64_t seed, const Outputs& o) {
  const std::string mode = cfg.value("mode", "single_peak");
  const double floor = cfg.value("floor", 0.1);
  qt::FlatModel model{cfg.value("n", 1), cfg.value("k", 100.0)};
  qt::SectionSum s(model);
  if (mode == "single_peak") {
    qt::SectionTerm t;
    t.p = qt::Point(model.n, qt::Complex{0.0, 0.0});
    t.p[0] = qt::Complex{1.0, 0.0};
    t.U = qt::make_chart(model, t.p).U;
    t.w0 = qt::Complex{1.0, 0.0};
    t.wr.assign(model.n - 1, qt::Complex{0.0, 0.0});
    s.add_term(std::move(t));
  } else if (mode == "construction") {
    qt::ConstructConfig c = parse_construct_config(cfg, seed);
    qt::ConstructionReport rep = qt::donaldson_construct(c);
    s = rep.section;
  } else {
    throw qt::DomainError("diag: mode must be single_peak or construction");
  }
  qt::LogDerivativeDiagnostic d =
      qt::log_derivative_diagnostic(model, s, floor, cfg.value("samples", 20000L));
  std::ostringstream sum;
  sum << "diag: sup |dlog s - k dphi| = " << d.sup << " (normalized " << d.sup_normalized
      << ") over " << d.probed << " probes";
  emit(o, "diag", cfg, qt::to_json(d), sum.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtrans: certified quantitative transversality toolbox"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "64-bit unsigned seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--out", out_path, "report JSON path (stdout when omitted)");
    sub->add_option("--csv", csv_path, "CSV side-output path");
  };

  const std::vector<std::string> subs{"perturb", "wongkew", "containment", "net",
                                      "color",   "donaldson", "moves",      "diag"};
  for (const auto& name : subs) add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    Json cfg = load_config(config_path);
    const std::uint64_t s = config_seed(cfg, seed, seed_set);
    Outputs o{out_path, csv_path};
    if (sub == "perturb") return run_perturb(cfg, s, o);
    if (sub == "wongkew") return run_wongkew(cfg, s, o);
    if (sub == "containment") return run_containment(cfg, s, o);
    if (sub == "net") return run_net(cfg, s, o, false);
    if (sub == "color") return run_net(cfg, s, o, true);
    if (sub == "donaldson") return run_donaldson(cfg, s, o);
    if (sub == "moves") return run_moves(cfg, s, o);
    if (sub == "diag") return run_diag(cfg, s, o);
    std::cerr << "{\"error\": \"unknown subcommand\"}\n";
    return 2;
  } catch (const qt::MathFailure& e) {
    std::cerr << "{\"error\": " << Json(e.what()).dump()
              << ", \"diagnostics\": " << e.diagnostics() << "}\n";
    return 1;
  } catch (const qt::DomainError& e) {
    std::cerr << "{\"error\": " << Json(e.what()).dump() << "}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": " << Json(e.what()).dump() << "}\n";
    return 2;
  }
}
