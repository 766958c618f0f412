#pragma once

// Geometry of the (T_n, W_n) region reachable by local-hidden-state models,
// its continuous-input limit, a brute-force oracle over deterministic
// response functions and an explicit SRQ model that saturates the smooth cap.

#include <vector>

#include "routed/strategies.hpp"

namespace routed {

struct LhsVertex {
  int k = 0;
  double T = 0.0;  // k / n
  double W = 0.0;  // upper boundary; the lower one is -W
};

struct LhsPolytope {
  int n = 1;
  std::vector<LhsVertex> vertices;  // k = 0..n
};

// Vertices (k/n, sin(pi k/2n) / (n sin(pi/2n))).
[[nodiscard]] LhsPolytope lhs_vertices(int n);
// Piecewise-linear upper boundary of the polytope at T.
[[nodiscard]] double lhs_boundary(const LhsPolytope& p, double Tn);
// |Wn| <= boundary(Tn).
[[nodiscard]] bool lhs_membership(double Tn, double Wn, int n);
// (2/pi) sin(pi T/2).
[[nodiscard]] double continuous_lhs_bound(double T);

struct BruteForceLhs {
  LhsPolytope polytope;
  std::vector<double> argmax_zeta;  // per k, lowest maximising hidden angle
};

// For each hidden angle zeta on a uniform grid over [0, pi) plus {0, pi/2n},
// sums the k largest |cos(theta_y - zeta)|; keeps the maximum per k.
[[nodiscard]] BruteForceLhs brute_force_lhs_detailed(int n, int zeta_grid = 100000, int threads = 0);
[[nodiscard]] LhsPolytope brute_force_lhs(int n, int zeta_grid = 100000);

struct SrqModelParams {
  double alpha = 0.0;  // trusted measurement angle, [0, pi/4]
  double omega = 0.0;  // response half-window, [0, pi/2]
  int n = RoutedStats::kContinuum;

  void validate() const;
};

// Phi+ with Alice measuring cos(a) H + (-1)^x sin(a) M and the short path H, M.
// The long-path device has already measured H; for input theta it answers
// 0 when theta is within omega of the measured direction, 1 when within omega
// of its antipode, and no-click otherwise.
[[nodiscard]] RoutedStats srq_saturating_stats(const SrqModelParams& p);
[[nodiscard]] CorrelationTable srq_saturating_table(const SrqModelParams& p);

}  // namespace routed
