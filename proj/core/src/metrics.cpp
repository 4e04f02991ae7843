#include "zigpcast/metrics.hpp"

#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "zigpcast/errors.hpp"

namespace zigpcast {

namespace {

std::map<TeamId, int> match_teams(std::span<const OutcomeDistribution> distributions,
                                  std::span<const RealizedResult> realized) {
  std::map<TeamId, int> ranks;
  for (const auto& r : realized) {
    if (r.rank < 1 || r.rank > kResultRanks) {
      throw ConfigError(fmt::format("realized rank {} for '{}' outside 1..{}", r.rank, r.team, kResultRanks));
    }
    if (!ranks.emplace(r.team, r.rank).second) throw ConfigError(fmt::format("team '{}' realized twice", r.team));
  }
  std::set<TeamId> predicted;
  for (const auto& d : distributions) {
    d.validate();
    if (!predicted.insert(d.team).second) throw ConfigError(fmt::format("team '{}' predicted twice", d.team));
  }
  std::vector<TeamId> only_predicted, only_realized;
  for (const auto& t : predicted)
    if (!ranks.contains(t)) only_predicted.push_back(t);
  for (const auto& [t, _] : ranks)
    if (!predicted.contains(t)) only_realized.push_back(t);
  if (!only_predicted.empty() || !only_realized.empty()) {
    throw ConfigError(fmt::format("team sets differ: predicted only [{}], realized only [{}]",
                                  fmt::join(only_predicted, ", "), fmt::join(only_realized, ", ")));
  }
  return ranks;
}

}  // namespace

void OutcomeDistribution::validate() const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError(fmt::format("outcome distribution of '{}' has an invalid probability {}", team, v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError(fmt::format("outcome distribution of '{}' sums to {}", team, sum));
  }
}

int result_rank(StageReached furthest) {
  switch (furthest) {
    case StageReached::Champion: return 1;
    case StageReached::Final: return 2;
    case StageReached::SemiFinal: return 3;
    case StageReached::QuarterFinal: return 4;
    case StageReached::RoundOf16: return 5;
    case StageReached::GroupStage: return 6;
  }
  return 6;
}

std::vector<RealizedResult> result_rank_from_run(const TournamentOutcome& outcome) {
  if (outcome.champion.empty() || outcome.teams.empty()) {
    throw ConfigError("tournament outcome is incomplete (no champion)");
  }
  std::vector<RealizedResult> out;
  for (const auto& [team, r] : outcome.teams) {
    if (r.group_position == 0) throw ConfigError(fmt::format("tournament outcome lacks a group result for '{}'", team));
    out.push_back({team, result_rank(r.furthest)});
  }
  return out;
}

std::vector<OutcomeDistribution> outcome_distributions(const SimulationAggregate& aggregate) {
  const double n = static_cast<double>(aggregate.run_count());
  if (n <= 0) throw ConfigError("simulation aggregate holds no runs");
  std::vector<OutcomeDistribution> out;
  for (const auto& [team, c] : aggregate.counters()) {
    OutcomeDistribution d;
    d.team = team;
    d.p[0] = static_cast<double>(c.champion) / n;
    d.p[1] = static_cast<double>(c.reached_final - c.champion) / n;
    d.p[2] = static_cast<double>(c.reached_sf - c.reached_final) / n;
    d.p[3] = static_cast<double>(c.reached_qf - c.reached_sf) / n;
    d.p[4] = static_cast<double>(c.reached_r16 - c.reached_qf) / n;
    d.p[5] = static_cast<double>(aggregate.run_count() - c.reached_r16) / n;
    out.push_back(d);
  }
  return out;
}

int most_likely_rank(const OutcomeDistribution& d) {
  int best = 0;
  for (int i = 1; i < kResultRanks; ++i)
    if (d.p[static_cast<std::size_t>(i)] > d.p[static_cast<std::size_t>(best)]) best = i;
  return best + 1;
}

double mld_error(const OutcomeDistribution& d, int realized_rank) {
  return std::abs(realized_rank - most_likely_rank(d));
}

double brier_error(const OutcomeDistribution& d, int realized_rank) {
  double s = 0.0;
  for (int j = 0; j < kResultRanks; ++j) {
    const double hit = (j + 1 == realized_rank) ? 1.0 : 0.0;
    const double diff = d.p[static_cast<std::size_t>(j)] - hit;
    s += diff * diff;
  }
  return s;
}

double rps_error(const OutcomeDistribution& d, int realized_rank) {
  double s = 0.0;
  double cum_p = 0.0;
  double cum_hit = 0.0;
  for (int i = 0; i < kResultRanks - 1; ++i) {
    cum_p += d.p[static_cast<std::size_t>(i)];
    cum_hit += (i + 1 == realized_rank) ? 1.0 : 0.0;
    s += (cum_p - cum_hit) * (cum_p - cum_hit);
  }
  return s / (kResultRanks - 1);
}

BacktestReport backtest(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized) {
  const auto ranks = match_teams(distributions, realized);
  BacktestReport report;
  for (const auto& d : distributions) {
    const int rank = ranks.at(d.team);
    TeamScore s{d.team, rank, most_likely_rank(d), mld_error(d, rank), brier_error(d, rank), rps_error(d, rank)};
    report.mld_total += s.mld;
    report.brier_total += s.brier;
    report.rps_total += s.rps;
    report.teams.push_back(std::move(s));
  }
  return report;
}

double mld(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized) {
  return backtest(distributions, realized).mld_total;
}

double brier(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized) {
  return backtest(distributions, realized).brier_total;
}

double rps(std::span<const OutcomeDistribution> distributions, std::span<const RealizedResult> realized) {
  return backtest(distributions, realized).rps_total;
}

}  // namespace zigpcast
