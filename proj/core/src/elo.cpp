#include "zigpcast/elo.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "zigpcast/errors.hpp"

namespace zigpcast {

int location_indicator(const TeamId& team, const TeamId& opponent, const std::string& venue_country) {
  if (venue_country.empty()) return 0;
  if (venue_country == team) return 1;
  if (venue_country == opponent) return -1;
  return 0;
}

int MatchRecord::location_for(const TeamId& team) const {
  if (neutral) return 0;
  return location_indicator(team, opponent_of(team), venue_country);
}

double expected_score(double elo_a, double elo_b) {
  const double diff = elo_a - elo_b;
  return 1.0 / (std::pow(10.0, -diff / 400.0) + 1.0);
}

double goal_multiplier(int goal_diff) {
  if (goal_diff < 0) {
    throw DomainError(fmt::format("goal multiplier needs an absolute goal difference (got {})", goal_diff));
  }
  if (goal_diff <= 1) return 1.0;
  if (goal_diff == 2) return 1.5;
  return (11.0 + goal_diff) / 8.0;
}

double match_outcome(int goals_for, int goals_against) {
  if (goals_for > goals_against) return 1.0;
  if (goals_for == goals_against) return 0.5;
  return 0.0;
}

double update(const EloUpdateInputs& in) {
  const double g = goal_multiplier(std::abs(in.goals_for - in.goals_against));
  const double w = match_outcome(in.goals_for, in.goals_against);
  const double we = expected_score(in.elo_before, in.elo_opponent);
  return in.elo_before + in.k_weight * g * (w - we);
}

KTable::KTable(std::map<std::string, double> weights) : weights_(std::move(weights)) {
  for (const auto& [code, k] : weights_) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw ConfigError(fmt::format("K weight for match type '{}' must be positive (got {})", code, k));
    }
  }
}

KTable KTable::defaults() {
  return KTable({{"WC", 60.0}, {"CONT", 50.0}, {"QUAL", 40.0}, {"NL", 40.0}, {"OTHER", 30.0},
                 {"FRIENDLY", 20.0}});
}

double KTable::at(const std::string& match_type) const {
  auto it = weights_.find(match_type);
  if (it == weights_.end()) {
    std::string known;
    for (const auto& [code, _] : weights_) known += (known.empty() ? "" : ", ") + code;
    throw ConfigError(fmt::format("no K weight for match type '{}' (known: {})", match_type, known));
  }
  return it->second;
}

void KTable::set(const std::string& match_type, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ConfigError(fmt::format("K weight for match type '{}' must be positive (got {})", match_type, k));
  }
  weights_[match_type] = k;
}

ReplayResult replay_history(std::span<const EloRating> seeds, std::vector<MatchRecord> matches,
                            const KTable& k_table) {
  ReplayResult result;
  for (const auto& seed : seeds) result.final_ratings[seed.team] = seed.points;

  for (std::size_t i = 0; i < matches.size(); ++i) {
    auto& m = matches[i];
    if (i > 0 && m.date < matches[i - 1].date) {
      throw ConfigError(fmt::format("match list is not chronological: {} ({} v {}) follows {}",
                                    m.date.iso(), m.team_a, m.team_b, matches[i - 1].date.iso()));
    }
    auto a = result.final_ratings.find(m.team_a);
    if (a == result.final_ratings.end()) {
      throw ConfigError(fmt::format("no seed rating for team '{}' (match on {})", m.team_a, m.date.iso()));
    }
    auto b = result.final_ratings.find(m.team_b);
    if (b == result.final_ratings.end()) {
      throw ConfigError(fmt::format("no seed rating for team '{}' (match on {})", m.team_b, m.date.iso()));
    }
    const double k = k_table.at(m.match_type);
    const double elo_a = a->second;
    const double elo_b = b->second;
    m.elo_a_before = elo_a;
    m.elo_b_before = elo_b;
    a->second = update({elo_a, elo_b, k, m.goals_a, m.goals_b});
    b->second = update({elo_b, elo_a, k, m.goals_b, m.goals_a});
  }
  result.matches = std::move(matches);
  return result;
}

}  // namespace zigpcast
