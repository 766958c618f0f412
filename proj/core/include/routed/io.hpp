#pragma once

// JSON and CSV serialisation. JSON numbers use the shortest representation
// that round-trips; CSV numbers are fixed with 12 decimals.

#include <stdexcept>
#include <string>
#include <vector>

#include "routed/bounds.hpp"
#include "routed/lhs_geometry.hpp"
#include "routed/lhv_models.hpp"
#include "routed/scan.hpp"
#include "routed/strategies.hpp"

namespace routed {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// {"n": int, "sp": [x][y][a][b], "lp": [x][y][a][b]} with b = 2 the no-click.
[[nodiscard]] std::string table_to_json(const CorrelationTable& t);
[[nodiscard]] CorrelationTable table_from_json(const std::string& text);

// {"S": num, "Wn": num, "Tn": num, "n": int}; n = 0 marks the continuum.
[[nodiscard]] std::string stats_to_json(const RoutedStats& s);
// Accepts a stats object or a correlation table (reduced with routed_stats).
[[nodiscard]] RoutedStats stats_from_json(const std::string& text);

[[nodiscard]] std::string verdict_to_json(const Verdict& v);
[[nodiscard]] std::string report_to_json(const VerifyReport& r);

[[nodiscard]] std::string polytope_to_json(const LhsPolytope& p);
[[nodiscard]] std::string polytope_to_csv(const LhsPolytope& p);

[[nodiscard]] std::string scan_to_json(const std::vector<ScanRow>& rows);
[[nodiscard]] std::string scan_to_csv(const std::vector<ScanRow>& rows);

[[nodiscard]] std::string envelope_to_json(const std::vector<EnvelopeCell>& cells);
[[nodiscard]] std::string envelope_to_csv(const std::vector<EnvelopeCell>& cells);

[[nodiscard]] std::string linear_bounds_to_json(const std::vector<LinearBoundRow>& rows);
[[nodiscard]] std::string linear_bounds_to_csv(const std::vector<LinearBoundRow>& rows);

[[nodiscard]] std::string curve_to_json(const std::vector<CurvePoint>& rows);
[[nodiscard]] std::string curve_to_csv(const std::vector<CurvePoint>& rows);

// "%.12f"; nan for missing values.
[[nodiscard]] std::string csv_number(double v);

}  // namespace routed
