#include "qtrans/serialize.hpp"

namespace qtrans {

Json to_json(const HoloPoly& p) {
  Json terms = Json::array();
  for (const auto& [a, c] : p.terms()) {
    Json t;
    t["alpha"] = a.e;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  return Json{{"n", p.dim()}, {"terms", std::move(terms)}};
}

HoloPoly holo_poly_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  HoloPoly p(n);
  for (const auto& t : j.at("terms")) {
    MultiIndex a(n);
    const auto& alpha = t.at("alpha");
    if (static_cast<int>(alpha.size()) != n)
      throw DomainError("holo_poly_from_json: alpha length mismatch");
    for (int i = 0; i < n; ++i) a.e[i] = alpha[i].get<std::uint32_t>();
    p.add_coefficient(a, Complex{t.at("re").get<double>(), t.at("im").get<double>()});
  }
  return p;
}

Json to_json(const ExpAffinePoly& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json jt;
    jt["p"] = to_json(t.p);
    Json lam = Json::array();
    for (const auto& l : t.lambda) lam.push_back(Json::array({l.real(), l.imag()}));
    jt["lambda"] = std::move(lam);
    jt["c"] = Json::array({t.c.real(), t.c.imag()});
    terms.push_back(std::move(jt));
  }
  return Json{{"n", f.dim()}, {"terms", std::move(terms)}};
}

ExpAffinePoly exp_affine_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  ExpAffinePoly f(n);
  for (const auto& jt : j.at("terms")) {
    ExpAffineTerm t;
    t.p = holo_poly_from_json(jt.at("p"));
    const auto& lam = jt.at("lambda");
    if (static_cast<int>(lam.size()) != n)
      throw DomainError("exp_affine_from_json: lambda length mismatch");
    t.lambda.resize(n);
    for (int i = 0; i < n; ++i)
      t.lambda[i] = Complex{lam[i][0].get<double>(), lam[i][1].get<double>()};
    t.c = Complex{jt.at("c")[0].get<double>(), jt.at("c")[1].get<double>()};
    f.add_term(std::move(t));
  }
  return f;
}

Json point_to_json(const Point& z) {
  Json out = Json::array();
  for (const auto& c : z) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return out;
}

Point point_from_json(const Json& j) {
  if (j.size() % 2 != 0) throw DomainError("point_from_json: odd coordinate count");
  Point z(j.size() / 2);
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = Complex{j[2 * i].get<double>(), j[2 * i + 1].get<double>()};
  return z;
}

Json to_json(const TransversalityCertificate& c) {
  return Json{{"grid_min", c.grid_min},
              {"slack", c.slack},
              {"bound", c.bound},
              {"witness", point_to_json(c.witness)},
              {"h", c.h},
              {"h_finest", c.h_finest},
              {"nodes", c.nodes},
              {"certified_above_threshold", c.certified_above_threshold},
              {"resolution_insufficient", c.resolution_insufficient}};
}

}  // namespace qtrans
