#include "routed/scan.hpp"

#include <cmath>

namespace routed {

std::vector<ScanRow> scan_eta(const std::vector<int>& ns, double eps, double delta, double resolution) {
  std::vector<ScanRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) {
    if (n < 1) throw DomainError("scan needs n >= 1");
    rows.push_back({n, critical_eta_explicit(eps, delta, n, resolution), small_violation_threshold(eps, delta, n)});
  }
  return rows;
}

NoiseParameters noise_parameters(const NoiseModel& nm, bool closed_form) {
  nm.validate();
  return {closed_form ? nm.closed_form_epsilon() : nm.binned_epsilon(), nm.delta()};
}

NoiseParameters simulated_noise_parameters(const NoiseModel& nm, int n) {
  const QubitStrategy s = apply_noise(ideal_strategy(n), nm);
  const RoutedStats st = routed_stats(correlations(s), n);
  NoiseParameters p;
  p.eps = 1.0 - st.S / kTsirelson;
  p.delta = st.Tn > 0.0 ? 1.0 - st.Wn / st.Tn : 0.0;
  return p;
}

std::vector<EnvelopeCell> envelope_map(int grid) {
  if (grid < 2) throw DomainError("envelope map needs grid >= 2");
  std::vector<EnvelopeCell> cells;
  cells.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const double s = j == grid - 1 ? kTsirelson : 2.0 + (kTsirelson - 2.0) * j / (grid - 1);
    for (int i = 0; i < grid; ++i) {
      const double t = static_cast<double>(i) / (grid - 1);
      cells.push_back({t, s, region_conditions(t, s)});
    }
  }
  return cells;
}

EnvelopeCounts count_regions(const std::vector<EnvelopeCell>& cells) {
  EnvelopeCounts c;
  for (const auto& cell : cells) {
    c.hessian += cell.flags.hessian_ok;
    c.envelope += cell.flags.envelope_iff;
    c.simple += cell.flags.simple_suff;
    c.linear += cell.flags.linear_suff;
  }
  return c;
}

std::vector<LinearBoundRow> linear_bounds_table(double S, int n, int points, int beta_grid) {
  if (points < 2) throw DomainError("table needs at least two points");
  std::vector<LinearBoundRow> rows;
  for (int i = 0; i < points; ++i) {
    const double T = static_cast<double>(i) / (points - 1);
    const LinearOptimum opt = min_linear_optimum(S, T, n, beta_grid);
    rows.push_back({T, nonlinear_bound(T, S, n), opt.cap, opt.beta, region_conditions(T, S).envelope_iff});
  }
  return rows;
}

std::vector<CurvePoint> continuous_bound_table(int points) {
  if (points < 2) throw DomainError("table needs at least two points");
  std::vector<CurvePoint> rows;
  for (int i = 0; i < points; ++i) {
    const double T = static_cast<double>(i) / (points - 1);
    rows.push_back({T, continuous_lhs_bound(T)});
  }
  return rows;
}

}  // namespace routed
