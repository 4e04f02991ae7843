#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <boost/math/distributions/poisson.hpp>

#include "oracles.hpp"
#include "zigpcast/errors.hpp"
#include "zigpcast/zigp.hpp"

using namespace zigpcast;

TEST(Zigp, ReducesToPoissonWhenPhiIsOneAndOmegaZero) {
  for (double mu = 0.05; mu <= 10.0; mu += 0.35) {
    boost::math::poisson_distribution<double> poisson(mu);
    for (int k = 0; k <= 30; ++k) {
      EXPECT_NEAR(pmf({mu, 1.0, 0.0}, k), boost::math::pdf(poisson, k), 1e-12) << "mu=" << mu << " k=" << k;
    }
  }
}

TEST(Zigp, LogPmfOfPoissonAtZeroIsExact) {
  EXPECT_EQ(log_pmf({1.0, 1.0, 0.0}, 0), -1.0);
  EXPECT_EQ(log_pmf({2.5, 1.0, 0.0}, 0), -2.5);
}

TEST(Zigp, MatchesLongDoubleOracleIncludingFarTail) {
  const ZigpParams cases[] = {{1.3552, 1.4, 0.0449}, {0.3, 3.0, 0.2}, {4.0, 1.05, 0.0}, {2.0, 2.0, 0.5}};
  for (const auto& p : cases) {
    for (int k : {0, 1, 2, 5, 10, 20, 50}) {
      const long double want = oracle::zigp_pmf(p.mu, p.phi, p.omega, k);
      const double got = pmf(p, k);
      EXPECT_NEAR(got / static_cast<double>(want), 1.0, 1e-10) << "k=" << k;
      EXPECT_NEAR(log_pmf(p, k), static_cast<double>(std::log(want)), 1e-10);
    }
  }
}

TEST(Zigp, ZeroProbabilityMixesPointMassAndGeneralizedPoisson) {
  const ZigpParams p{2.0, 1.5, 0.25};
  EXPECT_DOUBLE_EQ(pmf(p, 0), 0.25 + 0.75 * std::exp(-2.0 / 1.5));
}

TEST(Zigp, PmfSumsToOneAcrossParameterGrid) {
  for (double mu : {0.1, 0.8, 1.6, 3.0, 6.0}) {
    for (double phi : {1.0, 1.3, 2.0, 2.5}) {
      for (double omega : {0.0, 0.1, 0.6}) {
        double total = 0.0;
        for (int k = 0; k <= kHardGoalCap; ++k) total += pmf({mu, phi, omega}, k);
        EXPECT_NEAR(total, 1.0, 1e-6) << mu << " " << phi << " " << omega;
      }
    }
  }
}

TEST(Zigp, TruncatedPmfStopsAtTailMassAndRenormalizes) {
  const ZigpParams p{1.5, 1.2, 0.1};
  const auto probs = truncated_pmf(p);
  EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-15);
  double raw = 0.0;
  for (std::size_t k = 0; k + 1 < probs.size(); ++k) raw += pmf(p, static_cast<int>(k));
  EXPECT_LT(raw, 1.0 - kTruncationTailMass);
  EXPECT_GE(raw + pmf(p, static_cast<int>(probs.size() - 1)), 1.0 - kTruncationTailMass);
}

TEST(Zigp, TruncationRespectsHardCap) {
  const auto probs = truncated_pmf({50.0, 6.0, 0.0}, 1e-9, 40);
  EXPECT_EQ(probs.size(), 41u);
  EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-12);
}

TEST(Zigp, HeavyTailsAreCutAtTheHardCap) {
  // phi = 4 decays so slowly that 200 goals still leave ~1e-6 of mass behind.
  const ZigpParams p{6.0, 4.0, 0.0};
  const auto probs = truncated_pmf(p);
  EXPECT_EQ(probs.size(), static_cast<std::size_t>(kHardGoalCap + 1));
  EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-12);
}

TEST(Zigp, MomentsFromClosedFormMatchPmfSums) {
  for (const ZigpParams& p : {ZigpParams{1.2, 1.0, 0.0}, ZigpParams{1.8, 1.6, 0.15}, ZigpParams{0.7, 2.5, 0.4}}) {
    long double m1 = 0, m2 = 0;
    for (int k = 0; k <= kHardGoalCap; ++k) {
      const long double q = oracle::zigp_pmf(p.mu, p.phi, p.omega, k);
      m1 += k * q;
      m2 += static_cast<long double>(k) * k * q;
    }
    EXPECT_NEAR(p.mean(), static_cast<double>(m1), 1e-9);
    EXPECT_NEAR(p.variance(), static_cast<double>(m2 - m1 * m1), 1e-7);
  }
}

TEST(Zigp, RejectsInvalidParameters) {
  EXPECT_THROW(pmf({0.0, 1.0, 0.0}, 1), DomainError);
  EXPECT_THROW(pmf({1.0, 0.99, 0.0}, 1), DomainError);
  EXPECT_THROW(pmf({1.0, 1.0, 1.0}, 1), DomainError);
  EXPECT_THROW(pmf({1.0, 1.0, -0.1}, 1), DomainError);
  EXPECT_THROW(pmf({1.0, 1.0, 0.0}, -1), DomainError);
  EXPECT_THROW(pmf({std::nan(""), 1.0, 0.0}, 1), DomainError);
  RandomStream rng(1);
  EXPECT_THROW(sample({-1.0, 1.0, 0.0}, rng), DomainError);
}

TEST(Zigp, SamplingIsDeterministicPerSeed) {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample({1.4, 1.3, 0.1}, a), sample({1.4, 1.3, 0.1}, b));
}

TEST(Zigp, SampleFrequenciesFollowPmf) {
  const ZigpParams p{1.6, 1.4, 0.12};
  constexpr int n = 200000;
  std::vector<int> counts(20, 0);
  RandomStream rng(7);
  for (int i = 0; i < n; ++i) {
    const int k = sample(p, rng);
    if (k < 20) ++counts[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < 8; ++k) {
    const double q = pmf(p, k);
    const double sd = std::sqrt(q * (1 - q) / n);
    EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / double(n), q, 4.5 * sd) << "k=" << k;
  }
}
