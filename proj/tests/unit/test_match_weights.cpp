#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "zigpcast/errors.hpp"
#include "zigpcast/match_weights.hpp"

using namespace zigpcast;

namespace {
WeightConfig config() { return WeightConfig::defaults(Date(2021, 6, 11)); }
}  // namespace

TEST(Weights, DateWeightHalvesEveryHalfPeriod) {
  const auto cfg = config();
  const Date ref = cfg.reference_date;
  EXPECT_EQ(date_weight(ref, cfg), 1.0);
  EXPECT_EQ(date_weight(ref.plus_days(-1095), cfg), 0.5);
  EXPECT_EQ(date_weight(ref.plus_days(-2190), cfg), 0.25);
  EXPECT_NEAR(date_weight(ref.plus_days(-365), cfg), std::pow(0.5, 365.0 / 1095.0), 1e-15);
}

TEST(Weights, DateWeightRejectsMatchesAfterReference) {
  const auto cfg = config();
  EXPECT_THROW(date_weight(cfg.reference_date.plus_days(1), cfg), DomainError);
}

TEST(Weights, ImportanceTable) {
  const auto cfg = config();
  EXPECT_EQ(importance_weight("WC", cfg), 4.0);
  EXPECT_EQ(importance_weight("CONT", cfg), 3.0);
  EXPECT_EQ(importance_weight("QUAL", cfg), 2.5);
  EXPECT_EQ(importance_weight("NL", cfg), 2.5);
  EXPECT_EQ(importance_weight("FRIENDLY", cfg), 1.0);
  EXPECT_EQ(importance_weight("OTHER", cfg), 1.0);
  EXPECT_THROW(importance_weight("CUP", cfg), ConfigError);
}

TEST(Weights, MatchWeightIsProductOfFactors) {
  const auto cfg = config();
  const auto m = oracle::match(cfg.reference_date.plus_days(-1095).iso(), "A", "B", 0, 0, "QUAL");
  EXPECT_DOUBLE_EQ(match_weight(m, cfg), 1.25);
}

TEST(Weights, ConfigValidation) {
  auto cfg = config();
  cfg.half_period_days = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = config();
  cfg.importance["X"] = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}
