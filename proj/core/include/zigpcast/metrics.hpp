#pragma once

#include <array>
#include <span>
#include <vector>

#include "zigpcast/match_record.hpp"
#include "zigpcast/tournament.hpp"

namespace zigpcast {

// Result ranks: 1 champion, 2 losing finalist, 3 semifinal, 4 quarterfinal,
// 5 round of 16, 6 out after the group stage.
inline constexpr int kResultRanks = 6;

struct OutcomeDistribution {
  TeamId team;
  std::array<double, kResultRanks> p{};  // p[i] = P[rank = i + 1]

  void validate() const;
};

struct RealizedResult {
  TeamId team;
  int rank = 6;
};

int result_rank(StageReached furthest);
std::vector<RealizedResult> result_rank_from_run(const TournamentOutcome& outcome);

// Per-team rank distribution from Monte Carlo counters.
std::vector<OutcomeDistribution> outcome_distributions(const SimulationAggregate& aggregate);

// Argmax rank of a distribution; ties go to the smaller rank.
int most_likely_rank(const OutcomeDistribution& d);

// Per-team errors, in the order of `distributions`.
double mld_error(const OutcomeDistribution& d, int realized_rank);
double brier_error(const OutcomeDistribution& d, int realized_rank);
double rps_error(const OutcomeDistribution& d, int realized_rank);

// Totals over teams. Team sets must match exactly.
double mld(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized);
double brier(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized);
double rps(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized);

struct TeamScore {
  TeamId team;
  int realized_rank = 0;
  int predicted_rank = 0;
  double mld = 0.0;
  double brier = 0.0;
  double rps = 0.0;
};

struct BacktestReport {
  std::vector<TeamScore> teams;
  double mld_total = 0.0;
  double brier_total = 0.0;
  double rps_total = 0.0;
};

BacktestReport backtest(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized);

}  // namespace zigpcast
