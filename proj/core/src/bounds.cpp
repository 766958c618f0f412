#include "routed/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace routed {
namespace {

constexpr double kInvSqrt2 = 1.0 / kSqrt2;
constexpr double kDomainSlack = 1e-12;

double clamp_chsh(double S) {
  if (!std::isfinite(S)) throw DomainError("S must be finite");
  if (S > kTsirelson + kTsirelsonSlack) {
    throw DomainError("S = " + std::to_string(S) + " exceeds the Tsirelson bound 2*sqrt(2)");
  }
  return std::clamp(S, 2.0, kTsirelson);
}

void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0,1]");
}

// n sin(pi/2n), with the continuum limit pi/2.
double n_sin(int n) {
  if (n < 0) throw DomainError("setting count must be >= 1 (or 0 for the continuum)");
  if (n == RoutedStats::kContinuum) return kPi / 2.0;
  return n * std::sin(kPi / (2.0 * n));
}

// 1 - eps + sqrt(2 eps - eps^2) = sqrt2 gamma(s).
double f_eps(double eps) { return 1.0 - eps + std::sqrt(std::max(0.0, eps * (2.0 - eps))); }

double clamp_x(double x) {
  if (!std::isfinite(x) || x < kInvSqrt2 - kDomainSlack || x > 1.0 + kDomainSlack) {
    throw DomainError("x must lie in [1/sqrt2, 1]");
  }
  return std::clamp(x, kInvSqrt2, 1.0);
}

double eq12_lhs(double eta) {
  if (eta == 0.0) return 2.0 / kPi;
  return eta / std::sin(kPi * eta / 2.0);
}

}  // namespace

double gamma(double S) {
  const double s = clamp_chsh(S);
  return (s + std::sqrt(std::max(0.0, (kTsirelson - s) * (kTsirelson + s)))) / 4.0;
}

double lambda_n(int n) {
  if (n < 0) throw DomainError("setting count must be >= 1 (or 0 for the continuum)");
  if (n == RoutedStats::kContinuum) return 2.0 / kPi;
  return 1.0 / (n * std::sin(kPi / (2.0 * n)));
}

double r_function(double t, double s) {
  check_unit_interval(t, "T");
  return kSqrt2 * std::sin(kPi * t / 2.0) * gamma(s);
}

double nonlinear_bound(double Tn, double S, int n) { return r_function(Tn, S) * lambda_n(n); }

double steering_bound(double alpha, double Tn, int n) {
  if (!(alpha >= 0.0 && alpha <= kPi / 2.0)) throw DomainError("alpha must lie in [0, pi/2]");
  check_unit_interval(Tn, "T");
  // gamma(2(cos a + sin a)) = max(cos a, sin a); going through S loses ~1e-8 near pi/4
  const double g = std::max(std::cos(alpha), std::sin(alpha));
  return kSqrt2 * std::sin(kPi * Tn / 2.0) * g * lambda_n(n);
}

bool RegionFlags::chain_consistent() const {
  if (simple_suff && !linear_suff) return false;
  if (linear_suff && !envelope_iff) return false;
  if (envelope_iff && !hessian_ok) return false;
  return true;
}

double envelope_threshold(double eps) {
  return (2.0 + std::sqrt(std::max(0.0, (2.0 - eps) * eps)) - eps * (5.0 - 2.0 * eps)) / (2.0 * (1.0 - eps));
}

double hessian_threshold(double eps) {
  const double num = 1.0 + eps * (3.0 - 2.0 * (3.0 - eps) * eps);
  const double den =
      1.0 + 2.0 * std::sqrt(std::max(0.0, (2.0 - eps) * eps)) - eps * (5.0 - 2.0 * (3.0 - eps) * eps);
  return num / den;
}

RegionFlags region_conditions(double t, double s) {
  check_unit_interval(t, "t");
  const double sc = clamp_chsh(s);
  const double eps = 1.0 - sc / kTsirelson;
  const double f = f_eps(eps);
  const double u = kPi * t / 2.0;

  RegionFlags r;
  r.hessian_ok = std::cos(kPi * t) <= hessian_threshold(eps);

  double tan_ratio = 1.0;
  if (t >= 1.0) {
    tan_ratio = std::numeric_limits<double>::infinity();
  } else if (t > 0.0) {
    tan_ratio = std::tan(u) / u;
  }
  r.envelope_iff = tan_ratio >= envelope_threshold(eps);

  const double sin_ratio = t > 0.0 ? u / std::sin(u) : 1.0;
  r.simple_suff = sin_ratio >= f;
  r.linear_suff = f * std::cos(u) <= 1.0;
  return r;
}

double f_beta(double beta, double x) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  const double xc = clamp_x(x);
  return (xc + std::sqrt(1.0 - xc * xc)) / beta;
}

double h_beta(double beta, double x) {
  double f = f_beta(beta, x);
  if (f < 1.0 - kDomainSlack) {
    throw DomainError("f_beta(x) < 1: the linear family does not apply at beta = " + std::to_string(beta));
  }
  f = std::max(f, 1.0);
  return std::sqrt(f * f - 1.0) - std::acos(1.0 / f);
}

double h_beta_prime(double beta, double x) {
  double f = f_beta(beta, x);
  if (f < 1.0 - kDomainSlack) {
    throw DomainError("f_beta(x) < 1: the linear family does not apply at beta = " + std::to_string(beta));
  }
  f = std::max(f, 1.0);
  const double xc = clamp_x(x);
  if (xc >= 1.0) return -std::numeric_limits<double>::infinity();
  const double fp = (1.0 - xc / std::sqrt(1.0 - xc * xc)) / beta;
  return fp * std::sqrt(f * f - 1.0) / f;
}

void BoundParams::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0,1]");
  if (!(xi >= kInvSqrt2 - kDomainSlack && xi <= 1.0 + kDomainSlack)) {
    throw DomainError("xi must lie in [1/sqrt2, 1]");
  }
}

double linear_bound(const BoundParams& p, double S) {
  p.validate();
  const double d = clamp_chsh(S) / kTsirelson - p.xi;
  const double h = h_beta(p.beta, p.xi);
  if (d == 0.0) return h;
  return h + d * h_beta_prime(p.beta, p.xi);
}

double linear_lhs(double beta, double Wn, double Tn, int n) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0,1]");
  return n_sin(n) / beta * Wn - kPi / 2.0 * Tn;
}

double linear_cap(const BoundParams& p, double S, double Tn, int n) {
  check_unit_interval(Tn, "T");
  return lambda_n(n) * p.beta * (kPi / 2.0 * Tn + linear_bound(p, S));
}

LinearOptimum min_linear_optimum(double S, double Tn, int n, int beta_grid) {
  check_unit_interval(Tn, "T");
  if (beta_grid < 2) throw DomainError("beta grid needs at least two points");
  const double s = clamp_chsh(S);
  const double xi = std::clamp(s / kTsirelson, kInvSqrt2, 1.0);
  const double lam = lambda_n(n);
  auto cap = [&](double beta) { return lam * beta * (kPi / 2.0 * Tn + h_beta(beta, xi)); };

  constexpr double kBetaMin = 1e-6;
  const double log_span = std::log(1.0 / kBetaMin);
  auto grid_beta = [&](int i) {
    if (i == beta_grid - 1) return 1.0;
    return kBetaMin * std::exp(log_span * i / (beta_grid - 1));
  };

  int best = 0;
  double best_cap = cap(grid_beta(0));
  for (int i = 1; i < beta_grid; ++i) {
    const double c = cap(grid_beta(i));
    if (c < best_cap) {
      best_cap = c;
      best = i;
    }
  }

  // cap(beta) is convex in beta, so the minimum lies between the grid neighbours.
  double a = grid_beta(std::max(best - 1, 0));
  double b = grid_beta(std::min(best + 1, beta_grid - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = cap(c);
  double fd = cap(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = cap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = cap(d);
    }
  }
  LinearOptimum out{best_cap, grid_beta(best), xi};
  for (double beta : {a, b, 0.5 * (a + b)}) {
    const double v = cap(beta);
    if (v < out.cap) {
      out.cap = v;
      out.beta = beta;
    }
  }
  return out;
}

double min_linear_bound(double S, double Tn, int n, int beta_grid) {
  return min_linear_optimum(S, Tn, n, beta_grid).cap;
}

bool violation_condition_explicit(double eta, double eps, double delta, int n) {
  check_unit_interval(eta, "eta");
  check_unit_interval(eps, "eps");
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0,1)");
  const double rhs = (1.0 - eps + std::sqrt(eps * (2.0 - eps))) / ((1.0 - delta) * n_sin(n));
  return eq12_lhs(eta) > rhs;
}

double small_violation_threshold(double eps, double delta, int n) {
  if (!(eps >= 0.0) || !(delta >= 0.0)) throw DomainError("eps and delta must be non-negative");
  if (n < 1) throw DomainError("small-parameter threshold needs n >= 1");
  const double nn = static_cast<double>(n);
  return std::sqrt(1.0 + 24.0 / (kPi * kPi) * nn * nn * (delta + std::sqrt(2.0 * eps))) / nn;
}

bool violation_condition_small(double eta, double eps, double delta, int n) {
  return eta > small_violation_threshold(eps, delta, n);
}

std::optional<double> critical_eta_explicit(double eps, double delta, int n, double resolution) {
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
  double lo = 1e-6;
  double hi = 1.0;
  if (!violation_condition_explicit(hi, eps, delta, n)) return std::nullopt;
  if (violation_condition_explicit(lo, eps, delta, n)) return lo;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (violation_condition_explicit(mid, eps, delta, n)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Verdict certify(const RoutedStats& stats, const CertifyOptions& opts) {
  stats.validate();
  if (!(opts.tolerance >= 0.0)) throw DomainError("certification tolerance must be non-negative");
  Verdict v;
  v.S_used = clamp_chsh(stats.S);
  const double t = std::clamp(stats.Tn, 0.0, 1.0);
  v.region = region_conditions(t, v.S_used);
  if (v.region.envelope_iff) {
    v.bound_name = "nonlinear";
    v.bound_value = nonlinear_bound(t, v.S_used, stats.n);
  } else {
    v.bound_name = "linear-envelope";
    v.bound_value = min_linear_bound(v.S_used, t, stats.n, opts.beta_grid);
  }
  v.margin = stats.Wn - v.bound_value;
  v.lrq_certified = v.margin > opts.tolerance;
  return v;
}

}  // namespace routed
