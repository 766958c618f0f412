#include "routed/strategies.hpp"

#include <cmath>
#include <string>

namespace routed {
namespace {

void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

void require_dichotomic(const CMatrix& obs, const char* name) {
  if (obs.dim() != 2) throw DimensionError(std::string(name) + " must be a 2x2 observable");
  if (!obs.is_hermitian(tol::kArithmetic)) throw DomainError(std::string(name) + " is not Hermitian");
  const CMatrix id = identity2();
  // Eigenvalues in [-1,1]  <=>  I - A >= 0 and I + A >= 0.
  if (!(id - obs).is_psd() || !(id + obs).is_psd()) {
    throw DomainError(std::string(name) + " has eigenvalues outside [-1,1]");
  }
}

// Binary POVM of a lossy detector whose missed clicks are reported as `bin`.
Povm binned_povm(const CMatrix& obs, double efficiency, NoClickBin bin) {
  const CMatrix id = identity2();
  CMatrix p0 = 0.5 * (id + obs);
  CMatrix p1 = 0.5 * (id - obs);
  p0 = efficiency * p0;
  p1 = efficiency * p1;
  const CMatrix miss = (1.0 - efficiency) * id;
  if (bin == NoClickBin::Zero) {
    p0 = p0 + miss;
  } else {
    p1 = p1 + miss;
  }
  return Povm({p0, p1}, {0, 1});
}

Povm lossy_ternary_povm(const CMatrix& obs, double eta) {
  const CMatrix id = identity2();
  return Povm({eta * (0.5 * (id + obs)), eta * (0.5 * (id - obs)), (1.0 - eta) * id}, {0, 1, kNoClick});
}

void check_binary(int v, const char* name) {
  if (v != 0 && v != 1) throw std::out_of_range(std::string(name) + " must be 0 or 1");
}

}  // namespace

void QubitStrategy::validate() const {
  if (state.dim() != 4) throw DimensionError("strategy state must be a two-qubit density matrix");
  if (long_angles.empty()) throw DomainError("strategy needs at least one long-path setting");
  require_probability(eta, "eta");
  require_probability(alice_efficiency, "alice_efficiency");
  require_probability(short_efficiency, "short_efficiency");
  require_dichotomic(alice_obs[0], "A_0");
  require_dichotomic(alice_obs[1], "A_1");
  require_dichotomic(short_obs[0], "B^S_0");
  require_dichotomic(short_obs[1], "B^S_1");
  for (double a : long_angles) {
    if (!std::isfinite(a)) throw DomainError("long-path angle is not finite");
  }
}

void NoiseModel::validate() const {
  require_probability(eta_d, "eta_d");
  require_probability(nu, "nu");
  require_probability(eta_sp, "eta_sp");
  require_probability(eta_lp, "eta_lp");
}

double NoiseModel::closed_form_epsilon() const {
  return 1.0 - eta_d * eta_d * eta_sp * nu - (1.0 - eta_d) * (1.0 - eta_d) * (1.0 - eta_sp) / kSqrt2;
}

double NoiseModel::binned_epsilon() const {
  return 1.0 - eta_d * eta_d * eta_sp * nu - (1.0 - eta_d) * (1.0 - eta_sp * eta_d) / kSqrt2;
}

CorrelationTable::CorrelationTable(int n) : n_(n) {
  if (n < 1) throw DomainError("correlation table needs n >= 1");
  short_.assign(16, 0.0);
  long_.assign(static_cast<std::size_t>(2 * n * 2 * 3), 0.0);
}

std::size_t CorrelationTable::short_index(int a, int b, int x, int y) const {
  check_binary(a, "a");
  check_binary(b, "b");
  check_binary(x, "x");
  check_binary(y, "y");
  return static_cast<std::size_t>(((x * 2 + y) * 2 + a) * 2 + b);
}

std::size_t CorrelationTable::long_index(int a, int b, int x, int y) const {
  check_binary(a, "a");
  check_binary(x, "x");
  if (b < 0 || b > kNoClick) throw std::out_of_range("long-path outcome must be 0, 1 or no-click");
  if (y < 0 || y >= n_) throw std::out_of_range("long-path setting out of range");
  return static_cast<std::size_t>(((x * n_ + y) * 2 + a) * 3 + b);
}

double CorrelationTable::short_path(int a, int b, int x, int y) const { return short_[short_index(a, b, x, y)]; }
double CorrelationTable::long_path(int a, int b, int x, int y) const { return long_[long_index(a, b, x, y)]; }
void CorrelationTable::set_short_path(int a, int b, int x, int y, double p) { short_[short_index(a, b, x, y)] = p; }
void CorrelationTable::set_long_path(int a, int b, int x, int y, double p) { long_[long_index(a, b, x, y)] = p; }

void CorrelationTable::validate() const {
  auto check_entry = [](double p) {
    if (!(p >= -tol::kStructural && p <= 1.0 + tol::kStructural)) {
      throw DomainError("probability " + std::to_string(p) + " outside [0,1]");
    }
  };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          check_entry(short_path(a, b, x, y));
          sum += short_path(a, b, x, y);
        }
      if (std::abs(sum - 1.0) > tol::kStructural) throw DomainError("short-path distribution not normalised");
    }
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < n_; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b <= kNoClick; ++b) {
          check_entry(long_path(a, b, x, y));
          sum += long_path(a, b, x, y);
        }
      if (std::abs(sum - 1.0) > tol::kStructural) throw DomainError("long-path distribution not normalised");
    }
}

bool RoutedStats::exceeds_tsirelson() const { return std::abs(S) > 2.0 * kSqrt2 + tol::kStructural; }

void RoutedStats::validate() const {
  if (!std::isfinite(S) || !std::isfinite(Wn) || !std::isfinite(Tn)) throw DomainError("statistics must be finite");
  if (n < 0) throw DomainError("setting count must be positive (or 0 for a continuous input)");
  if (Tn < -tol::kStructural || Tn > 1.0 + tol::kStructural) throw DomainError("Tn must lie in [0,1]");
  // each witness term is at most |cos| + |sin| <= sqrt2 times the click probability
  if (std::abs(Wn) > kSqrt2 * Tn + tol::kStructural) throw DomainError("inconsistent statistics: |Wn| > sqrt2 Tn");
}

QubitStrategy ideal_strategy(int n, double eta) {
  if (n < 1) throw DomainError("ideal_strategy needs n >= 1");
  QubitStrategy s;
  s.long_angles.resize(static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) s.long_angles[static_cast<std::size_t>(y)] = y * kPi / n;
  s.eta = eta;
  s.validate();
  return s;
}

QubitStrategy apply_noise(const QubitStrategy& base, const NoiseModel& nm) {
  nm.validate();
  QubitStrategy s = base;
  s.state = DensityMatrix::mixture(nm.nu, base.state, DensityMatrix::maximally_mixed(4));
  s.alice_efficiency = base.alice_efficiency * nm.eta_d;
  s.short_efficiency = base.short_efficiency * nm.eta_sp * nm.eta_d;
  s.eta = base.eta * nm.eta_lp * nm.eta_d;
  s.validate();
  return s;
}

CorrelationTable born_table(const DensityMatrix& state, std::span<const Povm> alice,
                            std::span<const Povm> short_path, std::span<const Povm> long_path) {
  if (state.dim() != 4) throw DimensionError("born_table needs a two-qubit state");
  if (alice.size() != 2 || short_path.size() != 2) {
    throw DomainError("born_table needs two Alice and two short-path measurements");
  }
  for (const auto* group : {&alice, &short_path}) {
    for (const auto& p : *group) {
      if (p.size() != 2 || p.dim() != 2) throw DomainError("Alice/short-path measurements must be binary qubit POVMs");
    }
  }
  for (const auto& p : long_path) {
    if (p.size() != 3 || p.dim() != 2) throw DomainError("long-path measurements must be ternary qubit POVMs");
  }
  CorrelationTable t(static_cast<int>(long_path.size()));
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double p = born_expectation(state, kron(alice[x].element(a), short_path[y].element(b)));
          t.set_short_path(a, b, x, y, p);
        }
    for (int y = 0; y < t.n(); ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b <= kNoClick; ++b) {
          const double p = born_expectation(state, kron(alice[x].element(a), long_path[y].element(b)));
          t.set_long_path(a, b, x, y, p);
        }
  }
  return t;
}

CorrelationTable correlations(const QubitStrategy& s) {
  s.validate();
  const std::array<Povm, 2> alice{binned_povm(s.alice_obs[0], s.alice_efficiency, s.binning.alice),
                                  binned_povm(s.alice_obs[1], s.alice_efficiency, s.binning.alice)};
  const std::array<Povm, 2> bs{binned_povm(s.short_obs[0], s.short_efficiency, s.binning.short_path),
                               binned_povm(s.short_obs[1], s.short_efficiency, s.binning.short_path)};
  std::vector<Povm> bl;
  bl.reserve(s.long_angles.size());
  for (double theta : s.long_angles) bl.push_back(lossy_ternary_povm(bloch_observable(theta), s.eta));
  return born_table(s.state, alice, bs, bl);
}

RoutedStats routed_stats(const CorrelationTable& t, int n) {
  if (n != t.n()) {
    throw DomainError("table covers " + std::to_string(t.n()) + " long-path settings, expected " +
                      std::to_string(n));
  }
  auto short_corr = [&](int x, int y) {
    double c = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) c += ((a + b) % 2 == 0 ? 1.0 : -1.0) * t.short_path(a, b, x, y);
    return c;
  };
  auto long_corr = [&](int x, int y) {
    double c = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) c += ((a + b) % 2 == 0 ? 1.0 : -1.0) * t.long_path(a, b, x, y);
    return c;
  };

  RoutedStats st;
  st.n = n;
  st.S = short_corr(0, 0) + short_corr(0, 1) + short_corr(1, 0) - short_corr(1, 1);

  double w = 0.0;
  double clicks = 0.0;
  for (int y = 0; y < n; ++y) {
    const double theta = y * kPi / n;
    w += std::cos(theta) * long_corr(0, y) + std::sin(theta) * long_corr(1, y);
    for (int x = 0; x < 2; ++x)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) clicks += 0.5 * t.long_path(a, b, x, y);
  }
  st.Wn = w / n;
  st.Tn = clicks / n;
  return st;
}

double chained_ideal_score(int n) {
  if (n < 2) throw DomainError("chained Bell expression needs n >= 2");
  const DensityMatrix phi = DensityMatrix::phi_plus();
  auto corr = [&](int x, int y) {
    const CMatrix a = bloch_observable(x * kPi / n);
    const CMatrix b = bloch_observable((2 * y + 1) * kPi / (2.0 * n));
    return born_expectation(phi, kron(a, b));
  };
  double score = 0.0;
  for (int k = 0; k < n; ++k) score += corr(k, k);
  for (int k = 0; k + 1 < n; ++k) score += corr(k + 1, k);
  score -= corr(0, n - 1);
  return score;
}

DensityMatrix conditional_state(int x, int a, int n) {
  if (n < 1) throw DomainError("conditional_state needs n >= 1");
  if (x < 0 || x >= n) throw std::out_of_range("setting x must satisfy 0 <= x < n");
  if (a != 0 && a != 1) throw std::out_of_range("outcome a must be 0 or 1");
  const double sign = a == 0 ? 1.0 : -1.0;
  return DensityMatrix(0.5 * (identity2() + sign * bloch_observable(x * kPi / n)));
}

}  // namespace routed
