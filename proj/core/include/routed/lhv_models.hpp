#pragma once

// Local hidden-variable models that reproduce lossy maximally entangled
// correlations at their critical detection efficiency, with exact Born-rule
// targets and a seeded Monte Carlo sampler.
//
// Outcome layout of every distribution and tally: index a * (m + 1) + b,
// where a = 0 (+1) or 1 (-1) is Alice's answer, b in [0, m) is Bob's POVM
// outcome and b = m is no-click.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "routed/qmath.hpp"

namespace routed {

enum class LhvModelKind { GisinGisin, PovmExtension, Planar, PlanarPovm };

[[nodiscard]] double critical_eta(LhvModelKind kind);
[[nodiscard]] std::string_view model_name(LhvModelKind kind);
// Accepts gisin-gisin, povm-extension, planar, planar-povm.
[[nodiscard]] std::optional<LhvModelKind> parse_model(std::string_view name);
[[nodiscard]] bool is_planar(LhvModelKind kind);

// Extremal qubit POVM {alpha_b |y_b><y_b|}: sum alpha = 2, sum alpha_b y_b = 0.
struct BobMeasurement {
  std::vector<double> alphas;
  std::vector<Vec3> directions;

  static BobMeasurement projective(const Vec3& y);
  [[nodiscard]] int outcomes() const { return static_cast<int>(alphas.size()); }
  void validate() const;
  [[nodiscard]] bool is_projective() const;
};

struct LhvSetting {
  Vec3 alice;
  BobMeasurement bob;

  // Unit vectors within tol::kUnitVector; planar kinds need directions in the
  // x-z plane; GisinGisin and Planar need a projective Bob measurement.
  void validate(LhvModelKind kind) const;
  [[nodiscard]] int cells() const { return 2 * (bob.outcomes() + 1); }
};

// Counter-based generator: every (seed, stream) pair names an independent
// sequence of SplitMix64 outputs.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct SampleOptions {
  double extra_keep = 1.0;  // probability that a click survives extra loss
  int threads = 0;          // 0 = hardware concurrency
};

struct SampleBatch {
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  std::vector<LhvSetting> settings;
  std::vector<std::vector<std::uint64_t>> tallies;  // per setting, per cell
};

// count samples per setting, at most 2^40.
[[nodiscard]] SampleBatch lhv_sample(LhvModelKind kind, const std::vector<LhvSetting>& settings,
                                     std::uint64_t count, std::uint64_t seed, const SampleOptions& opts = {});

// Born-rule distribution of the lossy quantum experiment the model imitates,
// at efficiency critical_eta(kind) * extra_keep.
[[nodiscard]] std::vector<double> lhv_analytic_target(LhvModelKind kind, const LhvSetting& setting,
                                                      double extra_keep = 1.0);

struct PovmMixture {
  std::vector<double> weights;                  // p_{b'} = alpha_{b'} / 2
  std::vector<std::vector<CMatrix>> components;  // per b': m outcome elements then no-click

  // Sum_{b'} p_{b'} B_{b|b'}; m + 1 elements.
  [[nodiscard]] std::vector<CMatrix> average() const;
};

// Decomposes the 1/4-efficient version of an extremal POVM into two-outcome
// measurements that each click with probability 1/2.
[[nodiscard]] PovmMixture povm_mixture(const std::vector<double>& alphas, const std::vector<Vec3>& directions);
// {eta alpha_b |y_b><y_b|, (1 - eta) I}.
[[nodiscard]] std::vector<CMatrix> lossy_povm(const BobMeasurement& m, double eta);

struct VerifyOptions {
  double k_sigma = 4.0;
  std::optional<double> abs_tolerance;  // overrides the sigma test when set
  double extra_keep = 1.0;
  int threads = 0;
};

struct VerifyReport {
  std::string model;
  double eta_target = 0.0;
  double eta_empirical = 0.0;
  double max_dev = 0.0;
  double sigma = 0.0;  // binomial sigma of the cell with the largest deviation
  double max_z = 0.0;  // largest deviation in units of its sigma
  bool insufficient_samples = false;
  bool pass = false;
};

[[nodiscard]] VerifyReport lhv_verify(LhvModelKind kind, const std::vector<LhvSetting>& settings,
                                      std::uint64_t count, std::uint64_t seed, const VerifyOptions& opts = {});

// Reproducible random settings for a model: random unit vectors (or plane
// angles) and, for the POVM kinds, random extremal POVMs with 2 to 4 outcomes.
[[nodiscard]] std::vector<LhvSetting> default_settings(LhvModelKind kind, int count, std::uint64_t seed);

}  // namespace routed
