#pragma once

// Closed-form caps on the long-path witness of short-range quantum (SRQ)
// correlations, the region conditions that govern when the smooth cap is
// exact, the linear inequality family built from h_beta, and the explicit
// efficiency thresholds of the qubit strategy.
//
// Setting count n = RoutedStats::kContinuum (0) stands for infinitely many
// long-path inputs; lambda_n then takes its limit 2/pi.

#include <optional>
#include <string>

#include "routed/strategies.hpp"

namespace routed {

inline constexpr double kTsirelson = 2.0 * kSqrt2;
// Inputs up to this far above 2*sqrt2 are treated as round-off and clamped.
inline constexpr double kTsirelsonSlack = 1e-9;

// (S + sqrt(8 - S^2)) / 4. S < 2 is replaced by 2.
[[nodiscard]] double gamma(double S);
// 1 / (n sin(pi/2n)); 2/pi for n = kContinuum.
[[nodiscard]] double lambda_n(int n);
// sqrt2 sin(pi t/2) gamma(s): the cap on (pi/2)-normalised witnesses.
[[nodiscard]] double r_function(double t, double s);
// sqrt2 sin(pi T/2) gamma(S) lambda_n.
[[nodiscard]] double nonlinear_bound(double Tn, double S, int n);
// sqrt2 sin(pi T/2) gamma(2(cos a + sin a)) lambda_n.
[[nodiscard]] double steering_bound(double alpha, double Tn, int n);

struct RegionFlags {
  bool hessian_ok = false;    // (*)    Hessian of R negative semidefinite
  bool envelope_iff = false;  // (**)   R equals its concave envelope
  bool simple_suff = false;   // (***)  u / sin u >= sqrt2 gamma(s)
  bool linear_suff = false;   // (****) sqrt2 gamma(s) cos u <= 1

  // (***) => (****) => (**) => (*).
  [[nodiscard]] bool chain_consistent() const;
};

// t in [0,1], s in [2, 2 sqrt2]; u = pi t / 2, eps = 1 - s / (2 sqrt2).
[[nodiscard]] RegionFlags region_conditions(double t, double s);
// Right-hand side of (**) as a function of eps.
[[nodiscard]] double envelope_threshold(double eps);
// Right-hand side of (*) in terms of cos(pi t).
[[nodiscard]] double hessian_threshold(double eps);

// f_beta(x) = (x + sqrt(1-x^2)) / beta and h_beta(x) = sqrt(f^2-1) - arccos(1/f).
// Domain: beta in (0,1], x in [1/sqrt2, 1], f_beta(x) >= 1; DomainError otherwise.
[[nodiscard]] double f_beta(double beta, double x);
[[nodiscard]] double h_beta(double beta, double x);
// Closed-form derivative; -infinity at x = 1.
[[nodiscard]] double h_beta_prime(double beta, double x);

struct BoundParams {
  double beta = 1.0;
  double xi = 1.0 / kSqrt2;

  void validate() const;
};

// Right-hand side h_beta(xi) + (S/(2 sqrt2) - xi) h'_beta(xi) of the linear
// inequality (n sin(pi/2n) / beta) W - (pi/2) T <= rhs. The bound does not
// depend on n; only the left-hand side does.
[[nodiscard]] double linear_bound(const BoundParams& p, double S);
// Left-hand side (n sin(pi/2n) / beta) W - (pi/2) T.
[[nodiscard]] double linear_lhs(double beta, double Wn, double Tn, int n);
// W cap implied by a single member: lambda_n beta ((pi/2) T + rhs).
[[nodiscard]] double linear_cap(const BoundParams& p, double S, double Tn, int n);

struct LinearOptimum {
  double cap = 0.0;
  double beta = 1.0;
  double xi = 1.0;
};

// Smallest W cap over the family with xi = clamp(S/(2 sqrt2), 1/sqrt2, 1):
// log-spaced beta grid on [1e-6, 1] followed by golden-section refinement.
[[nodiscard]] LinearOptimum min_linear_optimum(double S, double Tn, int n, int beta_grid = 10000);
[[nodiscard]] double min_linear_bound(double S, double Tn, int n, int beta_grid = 10000);

// Explicit condition for the noisy qubit strategy: true iff
// eta / sin(pi eta/2) > (1 - eps + sqrt(eps(2-eps))) / ((1-delta) n sin(pi/2n)).
[[nodiscard]] bool violation_condition_explicit(double eta, double eps, double delta, int n);
// Small-parameter form: true iff eta > small_violation_threshold(eps, delta, n).
[[nodiscard]] bool violation_condition_small(double eta, double eps, double delta, int n);
// (1/n) sqrt(1 + (24/pi^2) n^2 (delta + sqrt(2 eps))).
[[nodiscard]] double small_violation_threshold(double eps, double delta, int n);
// Smallest eta violating the explicit condition, by bisection on [1e-6, 1].
// Empty when even eta = 1 does not violate it.
[[nodiscard]] std::optional<double> critical_eta_explicit(double eps, double delta, int n,
                                                          double resolution = 1e-12);

struct CertifyOptions {
  double tolerance = 1e-9;  // certified iff margin > tolerance
  int beta_grid = 10000;
};

struct Verdict {
  bool lrq_certified = false;
  std::string bound_name;  // "nonlinear" or "linear-envelope"
  double bound_value = 0.0;
  double margin = 0.0;  // Wn - bound_value
  double S_used = 0.0;  // S after clamping
  RegionFlags region;
};

// Throws DomainError on inconsistent stats or S beyond the Tsirelson slack.
[[nodiscard]] Verdict certify(const RoutedStats& stats, const CertifyOptions& opts = {});

}  // namespace routed
