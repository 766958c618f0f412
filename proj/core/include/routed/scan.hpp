#pragma once

// Parameter scans and the tables behind the command-line front end.

#include <optional>
#include <vector>

#include "routed/bounds.hpp"
#include "routed/lhs_geometry.hpp"

namespace routed {

struct ScanRow {
  int n = 1;
  std::optional<double> eta_crit_exact;  // empty when no eta <= 1 violates the condition
  double eta_crit_small = 0.0;
};

// Rows in the order of ns.
[[nodiscard]] std::vector<ScanRow> scan_eta(const std::vector<int>& ns, double eps, double delta,
                                            double resolution = 1e-12);

// eps and delta of a noise model. The default uses the exact CHSH deficit of
// the simulated binning model; closed_form selects the closed-form expression.
struct NoiseParameters {
  double eps = 0.0;
  double delta = 0.0;
};
[[nodiscard]] NoiseParameters noise_parameters(const NoiseModel& nm, bool closed_form = false);
// S and delta measured on the simulated strategy (delta from the long-path witness).
[[nodiscard]] NoiseParameters simulated_noise_parameters(const NoiseModel& nm, int n = 2);

struct EnvelopeCell {
  double t = 0.0;
  double s = 0.0;
  RegionFlags flags;
};

struct EnvelopeCounts {
  long hessian = 0;
  long envelope = 0;
  long simple = 0;
  long linear = 0;
};

// grid x grid cells with t uniform on [0,1] and s uniform on [2, 2 sqrt2], t fastest.
[[nodiscard]] std::vector<EnvelopeCell> envelope_map(int grid);
[[nodiscard]] EnvelopeCounts count_regions(const std::vector<EnvelopeCell>& cells);

struct LinearBoundRow {
  double T = 0.0;
  double nonlinear = 0.0;
  double min_linear = 0.0;
  double beta = 0.0;
  bool envelope_iff = false;
};

// points rows with T uniform on [0,1].
[[nodiscard]] std::vector<LinearBoundRow> linear_bounds_table(double S, int n, int points, int beta_grid = 10000);

struct CurvePoint {
  double T = 0.0;
  double W = 0.0;
};
[[nodiscard]] std::vector<CurvePoint> continuous_bound_table(int points);

}  // namespace routed
