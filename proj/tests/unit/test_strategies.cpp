#include <gtest/gtest.h>

#include "oracle.hpp"
#include "routed/strategies.hpp"

using namespace routed;

namespace {

// S of the noisy ideal strategy from state vectors. A binned lossy detector
// with efficiency e measuring A has effective observable e A + (1 - e) I.
long double oracle_noisy_chsh(long double eta_d, long double nu, long double eta_sp) {
  const auto psi = oracle::phi_plus();
  const long double ea = eta_d;
  const long double eb = eta_sp * eta_d;
  const oracle::Mat2 A[2] = {oracle::lin(ea, oracle::Z(), 1 - ea, oracle::eye()),
                             oracle::lin(ea, oracle::X(), 1 - ea, oracle::eye())};
  const oracle::Mat2 B[2] = {oracle::lin(eb, oracle::plane(oracle::kPi / 4), 1 - eb, oracle::eye()),
                             oracle::lin(eb, oracle::plane(-oracle::kPi / 4), 1 - eb, oracle::eye())};
  long double s = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) s += (x * y == 1 ? -1 : 1) * oracle::expect_noisy(psi, nu, A[x], B[y]);
  return s;
}

}  // namespace

TEST(IdealStrategy, Angles) {
  const auto s2 = ideal_strategy(2);
  ASSERT_EQ(s2.n(), 2);
  EXPECT_DOUBLE_EQ(s2.long_angles[0], 0.0);
  EXPECT_DOUBLE_EQ(s2.long_angles[1], kPi / 2);
  const auto s4 = ideal_strategy(4);
  ASSERT_EQ(s4.n(), 4);
  for (int y = 0; y < 4; ++y) EXPECT_DOUBLE_EQ(s4.long_angles[y], y * kPi / 4);
  EXPECT_EQ(s4.eta, 1.0);
}

TEST(IdealStrategy, RejectsZeroSettings) { EXPECT_THROW((void)ideal_strategy(0), DomainError); }

TEST(IdealStrategy, ChshAtTsirelsonForAnyN) {
  for (int n : {1, 2, 3, 7, 16}) {
    const RoutedStats st = routed_stats(correlations(ideal_strategy(n)), n);
    EXPECT_NEAR(st.S, 2.0 * kSqrt2, 1e-12) << "n=" << n;
  }
}

TEST(Correlations, ShortPathEntry) {
  const CorrelationTable t = correlations(ideal_strategy(2));
  // <Phi+| (I+Z)/2 (x) (I+H)/2 |Phi+> = (1 + 1/sqrt2)/4.
  const long double want = (2.0L + std::sqrt(2.0L)) / 8.0L;
  EXPECT_NEAR(t.short_path(0, 0, 0, 0), static_cast<double>(want), 1e-15);
  EXPECT_NEAR(t.short_path(0, 0, 0, 0), 0.426777, 1e-6);
}

TEST(Correlations, LossIsSettingIndependent) {
  for (int n : {2, 5}) {
    const CorrelationTable t = correlations(ideal_strategy(n, 0.5));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < n; ++y) {
        EXPECT_NEAR(t.long_path(0, kNoClick, x, y) + t.long_path(1, kNoClick, x, y), 0.5, 1e-15);
      }
  }
}

TEST(Correlations, PerfectCorrelationZZ) {
  const CorrelationTable t = correlations(ideal_strategy(2));
  EXPECT_NEAR(t.long_path(0, 0, 0, 0) + t.long_path(1, 1, 0, 0), 1.0, 1e-15);
}

TEST(Correlations, TableIsNormalised) {
  EXPECT_NO_THROW(correlations(apply_noise(ideal_strategy(6, 0.7), {0.9, 0.8, 0.95, 0.6})).validate());
}

TEST(Correlations, MatchesStateVectorOracle) {
  const int n = 5;
  const CorrelationTable t = correlations(ideal_strategy(n, 0.8));
  const auto psi = oracle::phi_plus();
  const oracle::Mat2 alice[2] = {oracle::Z(), oracle::X()};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const auto pa = oracle::lin(0.5L, oracle::eye(), a == 0 ? 0.5L : -0.5L, alice[x]);
          const auto pb = oracle::lin(0.5L * 0.8L, oracle::eye(), (b == 0 ? 0.5L : -0.5L) * 0.8L,
                                      oracle::plane(y * oracle::kPi / n));
          EXPECT_NEAR(t.long_path(a, b, x, y), static_cast<double>(oracle::expect(psi, pa, pb)), 1e-14);
        }
}

TEST(RoutedStats, IdealValues) {
  for (double eta : {1.0, 0.6, 0.3}) {
    const RoutedStats st = routed_stats(correlations(ideal_strategy(4, eta)), 4);
    EXPECT_NEAR(st.S, 2.0 * kSqrt2, 1e-12);
    EXPECT_NEAR(st.Wn, eta, 1e-14);
    EXPECT_NEAR(st.Tn, eta, 1e-14);
  }
}

TEST(RoutedStats, AllNoClick) {
  CorrelationTable t = correlations(ideal_strategy(3));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 2; ++a) {
        t.set_long_path(a, 0, x, y, 0.0);
        t.set_long_path(a, 1, x, y, 0.0);
        t.set_long_path(a, kNoClick, x, y, 0.5);
      }
  const RoutedStats st = routed_stats(t, 3);
  EXPECT_DOUBLE_EQ(st.Wn, 0.0);
  EXPECT_DOUBLE_EQ(st.Tn, 0.0);
}

TEST(RoutedStats, WhiteNoiseScalesWitness) {
  const RoutedStats st = routed_stats(correlations(apply_noise(ideal_strategy(4), {1.0, 0.8, 1.0, 1.0})), 4);
  EXPECT_NEAR(st.Wn, 0.8, 1e-14);
  EXPECT_NEAR(st.Tn, 1.0, 1e-14);
}

TEST(RoutedStats, SettingCountMismatch) {
  EXPECT_THROW((void)routed_stats(correlations(ideal_strategy(3)), 4), DomainError);
}

TEST(RoutedStats, Validation) {
  EXPECT_THROW((RoutedStats{2.5, 0.75, 0.5, 2}.validate()), DomainError);
  EXPECT_THROW((RoutedStats{2.5, 0.1, 1.5, 2}.validate()), DomainError);
  EXPECT_NO_THROW((RoutedStats{2.5, -0.5, 0.5, 2}.validate()));
  EXPECT_NO_THROW((RoutedStats{2.5, 0.7, 0.5, 2}.validate()));
  EXPECT_TRUE((RoutedStats{3.0, 0.0, 0.0, 1}.exceeds_tsirelson()));
  EXPECT_FALSE((RoutedStats{2.0 * kSqrt2, 0.0, 0.0, 1}.exceeds_tsirelson()));
}

TEST(ApplyNoise, NoiselessLimit) {
  const RoutedStats st = routed_stats(correlations(apply_noise(ideal_strategy(3), {})), 3);
  EXPECT_NEAR(1.0 - st.S / (2.0 * kSqrt2), 0.0, 1e-14);
  EXPECT_NEAR(1.0 - st.Wn / st.Tn, 0.0, 1e-14);
  EXPECT_NEAR(st.Tn, 1.0, 1e-14);
}

TEST(ApplyNoise, ZetaZeroGivesLongPathTransmission) {
  const NoiseModel nm{1.0, 1.0, 1.0, 0.37};
  EXPECT_DOUBLE_EQ(nm.eta(), 0.37);
  EXPECT_NEAR(routed_stats(correlations(apply_noise(ideal_strategy(2), nm)), 2).Tn, 0.37, 1e-15);
}

TEST(ApplyNoise, ParametersAtOnePercentNoise) {
  const NoiseModel nm{0.99, 0.99, 0.99, 0.3};
  const RoutedStats st = routed_stats(correlations(apply_noise(ideal_strategy(4), nm)), 4);
  EXPECT_NEAR(st.Tn, 0.297, 1e-14);
  EXPECT_NEAR(nm.delta(), 1.0 - 0.99 * 0.99, 1e-15);
  EXPECT_NEAR(1.0 - st.Wn / st.Tn, nm.delta(), 1e-13);

  const long double s_oracle = oracle_noisy_chsh(0.99L, 0.99L, 0.99L);
  const double eps_sim = 1.0 - st.S / (2.0 * kSqrt2);
  EXPECT_NEAR(eps_sim, static_cast<double>(1.0L - s_oracle / (2.0L * std::sqrt(2.0L))), 1e-13);
  EXPECT_NEAR(nm.binned_epsilon(), eps_sim, 1e-13);
  EXPECT_NEAR(nm.binned_epsilon(), 0.03926327575054393, 1e-14);

  // The closed form differs from the simulated binning model.
  const double closed = 1.0 - 0.99 * 0.99 * 0.99 * 0.99 - 0.01 * 0.01 * 0.01 / kSqrt2;
  EXPECT_NEAR(nm.closed_form_epsilon(), closed, 1e-15);
  EXPECT_NEAR(nm.closed_form_epsilon() - eps_sim, 1.4000714267494e-4, 1e-12);
}

TEST(ApplyNoise, BinnedEpsilonAcrossParameters) {
  for (double ed : {0.5, 0.8, 0.97, 1.0})
    for (double nu : {0.6, 0.9, 1.0})
      for (double esp : {0.3, 0.75, 1.0}) {
        const NoiseModel nm{ed, nu, esp, 0.5};
        const RoutedStats st = routed_stats(correlations(apply_noise(ideal_strategy(2), nm)), 2);
        EXPECT_NEAR(1.0 - st.S / (2.0 * kSqrt2), nm.binned_epsilon(), 1e-13);
        const long double s = oracle_noisy_chsh(ed, nu, esp);
        EXPECT_NEAR(st.S, static_cast<double>(s), 1e-13);
      }
}

TEST(ApplyNoise, RejectsOutOfRange) {
  EXPECT_THROW((void)apply_noise(ideal_strategy(2), {1.1, 1.0, 1.0, 1.0}), DomainError);
  EXPECT_THROW((void)apply_noise(ideal_strategy(2), {1.0, -0.1, 1.0, 1.0}), DomainError);
}

TEST(QubitStrategy, ValidationCatchesBadObservables) {
  QubitStrategy s = ideal_strategy(2);
  s.alice_obs[0] = 2.0 * pauli_z();
  EXPECT_THROW(s.validate(), DomainError);
  s = ideal_strategy(2);
  s.eta = 1.5;
  EXPECT_THROW(s.validate(), DomainError);
  s = ideal_strategy(2);
  s.long_angles.clear();
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Binning, OneBinMatchesFlippedCorrelator) {
  QubitStrategy s = ideal_strategy(2);
  s.alice_efficiency = 0.7;
  s.binning.alice = NoClickBin::One;
  const CorrelationTable t = correlations(s);
  // Binning to outcome 1 shifts the effective observable to e A - (1 - e) I.
  const double p = t.short_path(1, 0, 0, 0) + t.short_path(1, 1, 0, 0);
  EXPECT_NEAR(p, 0.7 * 0.5 + 0.3, 1e-15);
}

TEST(ChainedScore, SmallN) {
  EXPECT_NEAR(chained_ideal_score(2), 2.0 * kSqrt2, 1e-12);
  EXPECT_NEAR(chained_ideal_score(3), 3.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(chained_ideal_score(4), 8.0 * std::cos(kPi / 8), 1e-12);
  EXPECT_NEAR(chained_ideal_score(4), 7.391037, 1e-6);
}

TEST(ChainedScore, StateVectorOracle) {
  for (int n : {3, 6, 11}) {
    long double s = 0;
    const auto psi = oracle::phi_plus();
    auto corr = [&](int x, int y) {
      return oracle::expect(psi, oracle::plane(x * oracle::kPi / n), oracle::plane((2 * y + 1) * oracle::kPi / (2 * n)));
    };
    for (int k = 0; k < n; ++k) s += corr(k, k);
    for (int k = 0; k + 1 < n; ++k) s += corr(k + 1, k);
    s -= corr(0, n - 1);
    EXPECT_NEAR(chained_ideal_score(n), static_cast<double>(s), 1e-12);
  }
}

TEST(ChainedScore, RejectsSmallN) { EXPECT_THROW((void)chained_ideal_score(1), DomainError); }

TEST(ConditionalState, Examples) {
  const DensityMatrix s00 = conditional_state(0, 0, 4);
  EXPECT_LE(s00.matrix().max_abs_diff(CMatrix(2, {1.0, 0.0, 0.0, 0.0})), 1e-15);
  const DensityMatrix s01 = conditional_state(0, 1, 4);
  EXPECT_LE(s01.matrix().max_abs_diff(CMatrix(2, {0.0, 0.0, 0.0, 1.0})), 1e-15);
  const DensityMatrix s10 = conditional_state(1, 0, 4);
  const Vec3 b = s10.bloch_vector();
  EXPECT_NEAR(b.x, std::sin(kPi / 4), 1e-15);
  EXPECT_NEAR(b.y, 0.0, 1e-15);
  EXPECT_NEAR(b.z, std::cos(kPi / 4), 1e-15);
  for (int n : {2, 5, 9})
    for (int x = 0; x < n; ++x)
      for (int a = 0; a < 2; ++a) EXPECT_NEAR(conditional_state(x, a, n).purity(), 1.0, 1e-12);
}

TEST(ConditionalState, OutOfRange) {
  EXPECT_THROW((void)conditional_state(4, 0, 4), std::out_of_range);
  EXPECT_THROW((void)conditional_state(-1, 0, 4), std::out_of_range);
  EXPECT_THROW((void)conditional_state(0, 2, 4), std::out_of_range);
}

TEST(CorrelationTable, IndexChecks) {
  CorrelationTable t(2);
  EXPECT_THROW((void)t.long_path(0, 3, 0, 0), std::out_of_range);
  EXPECT_THROW((void)t.long_path(0, 0, 0, 2), std::out_of_range);
  EXPECT_THROW((void)t.short_path(0, 2, 0, 0), std::out_of_range);
  EXPECT_THROW(t.validate(), DomainError);
}
