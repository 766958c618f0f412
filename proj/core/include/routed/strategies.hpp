#pragma once

// Qubit strategies for the routed scenario: a source shared by Alice and a
// switch that sends Bob's qubit either to a nearby device (short path) or a
// distant, lossy device (long path).
//
// Outcome conventions: Alice and the short-path device are binary; a missed
// detection is binned into one of the two outcomes (outcome 0 by default).
// The long-path device reports a third outcome, kNoClick, for missed
// detections. Binary outcome a corresponds to the eigenvalue (-1)^a.

#include <array>
#include <vector>

#include "routed/qmath.hpp"

namespace routed {

inline constexpr int kNoClick = 2;

enum class NoClickBin { Zero = 0, One = 1 };

struct Binning {
  NoClickBin alice = NoClickBin::Zero;
  NoClickBin short_path = NoClickBin::Zero;
};

struct QubitStrategy {
  DensityMatrix state = DensityMatrix::phi_plus();
  std::array<CMatrix, 2> alice_obs{pauli_z(), pauli_x()};
  std::array<CMatrix, 2> short_obs{diagonal_plus(), diagonal_minus()};
  std::vector<double> long_angles;  // long-path measurement bases, radians
  double eta = 1.0;                 // long-path click probability
  double alice_efficiency = 1.0;    // Alice's detector click probability
  double short_efficiency = 1.0;    // short-path click probability (transmission * detector)
  Binning binning{};

  [[nodiscard]] int n() const { return static_cast<int>(long_angles.size()); }
  // Throws DomainError when an invariant is broken.
  void validate() const;
};

// Local detector efficiency, source visibility and the two path transmissions.
struct NoiseModel {
  double eta_d = 1.0;
  double nu = 1.0;
  double eta_sp = 1.0;
  double eta_lp = 1.0;

  void validate() const;

  // Long-path click probability of the noisy strategy.
  [[nodiscard]] double eta() const { return eta_lp * eta_d; }
  [[nodiscard]] double delta() const { return 1.0 - eta_d * nu; }
  // Closed form 1 - eta_d^2 eta_sp nu - (1-eta_d)^2 (1-eta_sp)/sqrt2.
  [[nodiscard]] double closed_form_epsilon() const;
  // Exact CHSH deficit of the Born-rule model with no-clicks binned to
  // outcome 0: 1 - eta_d^2 eta_sp nu - (1-eta_d)(1-eta_sp eta_d)/sqrt2.
  [[nodiscard]] double binned_epsilon() const;
};

// p(a,b|x,y,r) for both paths. Short path: a,b,x,y in {0,1}. Long path:
// x in {0,1}, y in [0,n), a in {0,1}, b in {0,1,kNoClick}.
class CorrelationTable {
 public:
  explicit CorrelationTable(int n);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double short_path(int a, int b, int x, int y) const;
  [[nodiscard]] double long_path(int a, int b, int x, int y) const;
  void set_short_path(int a, int b, int x, int y, double p);
  void set_long_path(int a, int b, int x, int y, double p);

  // Every conditional distribution sums to one within tol::kStructural and
  // every entry lies in [0,1]. Throws DomainError otherwise.
  void validate() const;

 private:
  [[nodiscard]] std::size_t short_index(int a, int b, int x, int y) const;
  [[nodiscard]] std::size_t long_index(int a, int b, int x, int y) const;

  int n_;
  std::vector<double> short_;
  std::vector<double> long_;
};

struct RoutedStats {
  double S = 0.0;   // short-path CHSH value
  double Wn = 0.0;  // long-path witness
  double Tn = 0.0;  // long-path click rate
  int n = 1;        // long-path setting count; kContinuum for a continuous input

  static constexpr int kContinuum = 0;

  [[nodiscard]] bool continuum() const { return n == kContinuum; }
  [[nodiscard]] bool exceeds_tsirelson() const;
  // 0 <= Tn <= 1 and |Wn| <= sqrt2 Tn (within tol::kStructural); throws DomainError.
  void validate() const;
};

[[nodiscard]] QubitStrategy ideal_strategy(int n, double eta = 1.0);
[[nodiscard]] QubitStrategy apply_noise(const QubitStrategy& base, const NoiseModel& nm);

// Born-rule table for arbitrary measurements: two binary POVMs for Alice,
// two binary POVMs for the short path and ternary {0, 1, no-click} POVMs
// for the long path, all acting on a two-qubit state.
[[nodiscard]] CorrelationTable born_table(const DensityMatrix& state, std::span<const Povm> alice,
                                          std::span<const Povm> short_path,
                                          std::span<const Povm> long_path);

[[nodiscard]] CorrelationTable correlations(const QubitStrategy& s);

// S, Wn and Tn of a table. The witness uses the fixed angles y*pi/n and
// long-path correlators summed over clicked outcomes only.
[[nodiscard]] RoutedStats routed_stats(const CorrelationTable& t, int n);

// Born-rule value of the n-input chained Bell expression for Phi+ with
// Alice at angles x*pi/n and Bob at (2y+1)*pi/(2n).
[[nodiscard]] double chained_ideal_score(int n);

// Alice's conditional state 1/2 (I + (-1)^a (cos(x pi/n) Z + sin(x pi/n) X)).
[[nodiscard]] DensityMatrix conditional_state(int x, int a, int n);

}  // namespace routed
