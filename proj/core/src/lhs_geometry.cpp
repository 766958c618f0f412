#include "routed/lhs_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace routed {
namespace {

constexpr double kTieTolerance = 1e-12;

struct ScanBest {
  std::vector<double> value;
  std::vector<double> zeta;
};

ScanBest scan_range(int n, const std::vector<double>& zetas, std::size_t begin, std::size_t end) {
  ScanBest best{std::vector<double>(static_cast<std::size_t>(n) + 1, -1.0),
                std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
  std::vector<double> c(static_cast<std::size_t>(n));
  for (std::size_t j = begin; j < end; ++j) {
    const double zeta = zetas[j];
    for (int y = 0; y < n; ++y) c[static_cast<std::size_t>(y)] = std::abs(std::cos(y * kPi / n - zeta));
    std::sort(c.begin(), c.end(), std::greater<>());
    double prefix = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) prefix += c[static_cast<std::size_t>(k - 1)];
      const double w = prefix / n;
      if (w > best.value[static_cast<std::size_t>(k)] + kTieTolerance) {
        best.value[static_cast<std::size_t>(k)] = w;
        best.zeta[static_cast<std::size_t>(k)] = zeta;
      }
    }
  }
  return best;
}

double angular_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

}  // namespace

LhsPolytope lhs_vertices(int n) {
  if (n < 1) throw DomainError("lhs_vertices needs n >= 1");
  LhsPolytope p;
  p.n = n;
  const double denom = n * std::sin(kPi / (2.0 * n));
  for (int k = 0; k <= n; ++k) {
    p.vertices.push_back({k, static_cast<double>(k) / n, std::sin(kPi * k / (2.0 * n)) / denom});
  }
  return p;
}

double lhs_boundary(const LhsPolytope& p, double Tn) {
  if (!(Tn >= 0.0 && Tn <= 1.0)) throw DomainError("T must lie in [0,1]");
  const double pos = Tn * p.n;
  const int k = std::min(static_cast<int>(std::floor(pos)), p.n - 1);
  const auto& a = p.vertices[static_cast<std::size_t>(k)];
  const auto& b = p.vertices[static_cast<std::size_t>(k) + 1];
  const double frac = pos - k;
  return a.W + frac * (b.W - a.W);
}

bool lhs_membership(double Tn, double Wn, int n) {
  return std::abs(Wn) <= lhs_boundary(lhs_vertices(n), Tn);
}

double continuous_lhs_bound(double T) {
  if (!(T >= 0.0 && T <= 1.0)) throw DomainError("T must lie in [0,1]");
  return 2.0 / kPi * std::sin(kPi * T / 2.0);
}

BruteForceLhs brute_force_lhs_detailed(int n, int zeta_grid, int threads) {
  if (n < 1) throw DomainError("brute_force_lhs needs n >= 1");
  if (zeta_grid < 1) throw DomainError("zeta grid needs at least one point");
  std::vector<double> zetas;
  zetas.reserve(static_cast<std::size_t>(zeta_grid) + 2);
  for (int j = 0; j < zeta_grid; ++j) zetas.push_back(kPi * j / zeta_grid);
  zetas.push_back(0.0);
  zetas.push_back(kPi / (2.0 * n));
  std::sort(zetas.begin(), zetas.end());
  zetas.erase(std::unique(zetas.begin(), zetas.end()), zetas.end());

  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(zetas.size()));
  std::vector<ScanBest> partial(static_cast<std::size_t>(workers));
  const std::size_t chunk = (zetas.size() + workers - 1) / workers;
  auto run = [&](int w) {
    const std::size_t b = std::min(zetas.size(), chunk * static_cast<std::size_t>(w));
    const std::size_t e = std::min(zetas.size(), b + chunk);
    partial[static_cast<std::size_t>(w)] = scan_range(n, zetas, b, e);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  // Chunks cover increasing zeta, so merging in chunk order keeps the lowest-zeta tie-break.
  BruteForceLhs out;
  out.polytope.n = n;
  out.argmax_zeta.assign(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> best(static_cast<std::size_t>(n) + 1, -1.0);
  for (const auto& part : partial) {
    for (std::size_t k = 0; k < part.value.size(); ++k) {
      if (part.value[k] > best[k] + kTieTolerance) {
        best[k] = part.value[k];
        out.argmax_zeta[k] = part.zeta[k];
      }
    }
  }
  for (int k = 0; k <= n; ++k) {
    out.polytope.vertices.push_back({k, static_cast<double>(k) / n, best[static_cast<std::size_t>(k)]});
  }
  return out;
}

LhsPolytope brute_force_lhs(int n, int zeta_grid) { return brute_force_lhs_detailed(n, zeta_grid).polytope; }

void SrqModelParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= kPi / 4.0)) throw DomainError("alpha must lie in [0, pi/4]");
  if (!(omega >= 0.0 && omega <= kPi / 2.0)) throw DomainError("omega must lie in [0, pi/2]");
  if (n < 0) throw DomainError("n must be >= 1 (or 0 for the continuum)");
}

CorrelationTable srq_saturating_table(const SrqModelParams& p) {
  p.validate();
  if (p.n == RoutedStats::kContinuum) throw DomainError("a correlation table needs finitely many settings");
  const CMatrix h = diagonal_plus();
  const CMatrix m = diagonal_minus();
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const std::array<Povm, 2> alice{Povm::from_observable(ca * h + sa * m),
                                  Povm::from_observable(ca * h - sa * m)};
  const std::array<Povm, 2> sp{Povm::from_observable(h), Povm::from_observable(m)};

  const CMatrix id = identity2();
  const CMatrix e_plus = 0.5 * (id + h);
  const CMatrix e_minus = 0.5 * (id - h);
  const double measured = kPi / 4.0;  // Bloch angle of the +1 eigenvector of H
  std::vector<Povm> lp;
  for (int y = 0; y < p.n; ++y) {
    const double theta = y * kPi / p.n;
    double p0 = 0.0;
    double p1 = 0.0;
    if (angular_distance(theta, measured) <= p.omega) {
      p0 = 1.0;
    } else if (angular_distance(theta, measured + kPi) <= p.omega) {
      p1 = 1.0;
    }
    const double pn = 1.0 - p0 - p1;
    lp.emplace_back(std::vector<CMatrix>{p0 * e_plus + p1 * e_minus, p1 * e_plus + p0 * e_minus, pn * id},
                    std::vector<int>{0, 1, kNoClick});
  }
  return born_table(DensityMatrix::phi_plus(), alice, sp, lp);
}

RoutedStats srq_saturating_stats(const SrqModelParams& p) {
  p.validate();
  if (p.n == RoutedStats::kContinuum) {
    RoutedStats st;
    st.n = RoutedStats::kContinuum;
    st.S = 2.0 * (std::cos(p.alpha) + std::sin(p.alpha));
    st.Tn = p.omega / (kPi / 2.0);
    st.Wn = kSqrt2 * std::cos(p.alpha) * std::sin(p.omega) / (kPi / 2.0);
    return st;
  }
  return routed_stats(srq_saturating_table(p), p.n);
}

}  // namespace routed
