#include <gtest/gtest.h>

#include "zigpcast/errors.hpp"
#include "zigpcast/metrics.hpp"

using namespace zigpcast;

namespace {

OutcomeDistribution uniform(const std::string& team) {
  OutcomeDistribution d{team, {}};
  d.p.fill(1.0 / 6.0);
  return d;
}

OutcomeDistribution point(const std::string& team, int rank) {
  OutcomeDistribution d{team, {}};
  d.p[static_cast<std::size_t>(rank - 1)] = 1.0;
  return d;
}

}  // namespace

TEST(Metrics, UniformBrierPerTeam) {
  for (int r = 1; r <= 6; ++r) EXPECT_NEAR(brier_error(uniform("X"), r), 25.0 / 30.0, 1e-15);
}

TEST(Metrics, UniformBrierOverTwentyFourTeams) {
  std::vector<OutcomeDistribution> d;
  std::vector<RealizedResult> r;
  for (int i = 0; i < 24; ++i) {
    d.push_back(uniform("T" + std::to_string(i)));
    r.push_back({"T" + std::to_string(i), 1 + i % 6});
  }
  EXPECT_NEAR(brier(d, r), 20.0, 1e-12);
}

TEST(Metrics, RpsToy) {
  OutcomeDistribution d{"X", {0.8, 0.2, 0.0, 0.0, 0.0, 0.0}};
  EXPECT_NEAR(rps_error(d, 2), 0.128, 1e-15);
}

TEST(Metrics, RpsOfUniformAgainstHandSums) {
  // Cumulative forecast i/6 against a step at the realized rank.
  const double expected[] = {(25 + 16 + 9 + 4 + 1) / 36.0 / 5, (1 + 16 + 9 + 4 + 1) / 36.0 / 5,
                             (1 + 4 + 9 + 4 + 1) / 36.0 / 5,   (1 + 4 + 9 + 4 + 1) / 36.0 / 5,
                             (1 + 4 + 9 + 16 + 1) / 36.0 / 5,  (1 + 4 + 9 + 16 + 25) / 36.0 / 5};
  for (int r = 1; r <= 6; ++r) EXPECT_NEAR(rps_error(uniform("X"), r), expected[r - 1], 1e-15) << r;
}

TEST(Metrics, PerfectForecastsScoreZero) {
  std::vector<OutcomeDistribution> d;
  std::vector<RealizedResult> r;
  for (int rank = 1; rank <= 6; ++rank) {
    d.push_back(point("T" + std::to_string(rank), rank));
    r.push_back({"T" + std::to_string(rank), rank});
  }
  const auto report = backtest(d, r);
  EXPECT_EQ(report.mld_total, 0.0);
  EXPECT_EQ(report.brier_total, 0.0);
  EXPECT_EQ(report.rps_total, 0.0);
}

TEST(Metrics, MostLikelyRankBreaksTiesTowardsSmallerRank) {
  EXPECT_EQ(most_likely_rank(uniform("X")), 1);
  OutcomeDistribution d{"X", {0.1, 0.1, 0.3, 0.3, 0.1, 0.1}};
  EXPECT_EQ(most_likely_rank(d), 3);
  EXPECT_EQ(mld_error(d, 6), 3.0);
  EXPECT_EQ(mld_error(d, 1), 2.0);
}

TEST(Metrics, WorstCaseBrierIsTwo) { EXPECT_EQ(brier_error(point("X", 1), 6), 2.0); }

TEST(Metrics, TeamSetMismatchIsAnError) {
  std::vector<OutcomeDistribution> d{uniform("A"), uniform("B")};
  std::vector<RealizedResult> r{{"A", 1}, {"C", 2}};
  try {
    backtest(d, r);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("B"), std::string::npos);
    EXPECT_NE(msg.find("C"), std::string::npos);
  }
}

TEST(Metrics, InvalidDistributionsAndRanksRejected) {
  OutcomeDistribution bad{"A", {0.5, 0.4, 0.0, 0.0, 0.0, 0.0}};
  EXPECT_THROW(bad.validate(), DomainError);
  std::vector<OutcomeDistribution> d{uniform("A")};
  std::vector<RealizedResult> r{{"A", 7}};
  EXPECT_THROW(backtest(d, r), ConfigError);
}

TEST(Metrics, ResultRanks) {
  EXPECT_EQ(result_rank(StageReached::Champion), 1);
  EXPECT_EQ(result_rank(StageReached::Final), 2);
  EXPECT_EQ(result_rank(StageReached::SemiFinal), 3);
  EXPECT_EQ(result_rank(StageReached::QuarterFinal), 4);
  EXPECT_EQ(result_rank(StageReached::RoundOf16), 5);
  EXPECT_EQ(result_rank(StageReached::GroupStage), 6);
}
