#pragma once

#include <string>

#include "qtrans/algvar.hpp"
#include "qtrans/construct.hpp"
#include "qtrans/diagnostics.hpp"
#include "qtrans/lef_moves.hpp"
#include "qtrans/serialize.hpp"

namespace qtrans {

/// Versioned defaults table embedded in the binary and echoed in reports.
struct Defaults {
  static constexpr const char* version = "qtrans-defaults-1";
  static constexpr double p_exp = 3.0;
  static constexpr double B = 10.0;
  static constexpr double eta0 = 0.25;
  static constexpr double taylor_C = 8.0;
  static constexpr double eps_margin = 0.25;
  static constexpr double gamma_accept = 0.99;
  static constexpr double eta_floor = 1e-3;
  static constexpr long perturb_budget = 100000;
  // A = 8 makes the first color unreachable (eta_1 = eta_0 |ln eta_0|^{-p}
  // exceeds the amplitude cap eta_0 / (A C)); these defaults keep every round
  // feasible and are echoed in every report.
  static double A(int n) { return n <= 1 ? 2.0 : 1.5; }
  static double D(int n) { return n <= 1 ? 4.0 : 6.0; }
  static double density(int n) { return n <= 1 ? 50.0 : 4.0; }
};

Json defaults_to_json();

/// Serializes with sorted keys, 17-significant-digit floats and a trailing
/// newline; byte-identical for identical content.
std::string render_report(const Json& j);

/// Full report envelope: version, config echo, payload. Deterministic for
/// identical (config, seed); wall-clock data goes to stderr, never into the
/// artifact.
Json make_report(const std::string& tool, const Json& config_echo, const Json& payload);

void write_file(const std::string& path, const std::string& content);

/// CSV writer: header row, comma separation, trailing newline.
std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

// payload serializers
Json to_json(const PerturbationCertificate& c);
Json to_json(const Schedule& s);
Json to_json(const ConstructionReport& r, bool include_points = true);
Json to_json(const TubeEstimate& t);
Json to_json(const ContainmentWitness& w);
Json to_json(const RealPoly& p);
RealPoly real_poly_from_json(const Json& j);
Json to_json(const LefschetzWord& w);
LefschetzWord lefschetz_word_from_json(const Json& j);
Json to_json(const LogDerivativeDiagnostic& d);

}  // namespace qtrans
