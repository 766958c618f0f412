#pragma once

// Random states and measurements for property checks.

#include <random>
#include <vector>

#include "routed/strategies.hpp"

namespace testsupport {

using namespace routed;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uni(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  Vec3 unit() {
    std::normal_distribution<double> g;
    const Vec3 v{g(rng_), g(rng_), g(rng_)};
    return v * (1.0 / v.norm());
  }

  DensityMatrix state() {
    std::normal_distribution<double> g;
    std::vector<Complex> a(16);
    for (auto& z : a) z = Complex(g(rng_), g(rng_));
    const CMatrix m(4, a);
    CMatrix rho = m * m.adjoint();
    rho = (1.0 / rho.trace().real()) * rho;
    // symmetrise away rounding
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
  }

  // {E, I - E} with E = c I + r n.sigma, 0 <= c - r, c + r <= 1.
  Povm binary() {
    const double r = uni(0.0, 0.5);
    const double c = uni(r, 1.0 - r);
    const CMatrix e = c * identity2() + r * bloch_observable(unit());
    return Povm({e, identity2() - e}, {0, 1});
  }

  Povm projective() { return Povm::from_observable(bloch_observable(unit())); }

  // {p0 P_n, p1 P_-n, rest} for the long path.
  Povm ternary() {
    const Vec3 n = unit();
    const double p0 = uni();
    const double p1 = uni();
    const CMatrix e0 = p0 * bloch_projector(n);
    const CMatrix e1 = p1 * bloch_projector(n * -1.0);
    return Povm({e0, e1, identity2() - e0 - e1}, {0, 1, kNoClick});
  }

 private:
  std::mt19937_64 rng_;
};

// Normalisation and no-signalling of one random Born table; returns the
// largest violation found.
inline double no_signalling_defect(Gen& g, int n) {
  const DensityMatrix rho = g.state();
  const std::vector<Povm> alice{g.binary(), g.binary()};
  const std::vector<Povm> sp{g.binary(), g.binary()};
  std::vector<Povm> lp;
  for (int y = 0; y < n; ++y) lp.push_back(g.ternary());
  const CorrelationTable t = born_table(rho, alice, sp, lp);
  t.validate();
  double worst = 0.0;
  auto upd = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      const double ref = t.short_path(a, 0, x, 0) + t.short_path(a, 1, x, 0);
      upd(t.short_path(a, 0, x, 1) + t.short_path(a, 1, x, 1), ref);
      for (int y = 0; y < n; ++y) {
        upd(t.long_path(a, 0, x, y) + t.long_path(a, 1, x, y) + t.long_path(a, kNoClick, x, y), ref);
      }
    }
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      upd(t.short_path(0, b, 0, y) + t.short_path(1, b, 0, y), t.short_path(0, b, 1, y) + t.short_path(1, b, 1, y));
    }
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < n; ++y) {
      double total = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b <= kNoClick; ++b) total += t.long_path(a, b, x, y);
      upd(total, 1.0);
    }
  return worst;
}

}  // namespace testsupport
