#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "zigpcast/date.hpp"
#include "zigpcast/match_record.hpp"

namespace zigpcast {

struct EloRating {
  TeamId team;
  double points = 0.0;
  Date as_of;
};

struct EloUpdateInputs {
  double elo_before = 0.0;
  double elo_opponent = 0.0;
  double k_weight = 0.0;
  int goals_for = 0;
  int goals_against = 0;
};

// Win expectancy 1 / (10^(-D/400) + 1) with D = elo_a - elo_b. No home offset.
double expected_score(double elo_a, double elo_b);

// G: 1 for a draw or one-goal margin, 1.5 for two goals, (11 + N) / 8 beyond.
double goal_multiplier(int goal_diff);

// W: 1 win, 0.5 draw, 0 loss from the perspective of `goals_for`.
double match_outcome(int goals_for, int goals_against);

// Elo_after = Elo_before + K * G * (W - We).
double update(const EloUpdateInputs& inputs);

// Tournament weight K per match-type code.
class KTable {
 public:
  KTable() = default;
  explicit KTable(std::map<std::string, double> weights);

  // World Cup 60, continental finals 50, qualifiers / Nations League 40,
  // other tournaments 30, friendlies 20.
  static KTable defaults();

  double at(const std::string& match_type) const;
  bool contains(const std::string& match_type) const { return weights_.contains(match_type); }
  void set(const std::string& match_type, double k);
  const std::map<std::string, double>& entries() const { return weights_; }

 private:
  std::map<std::string, double> weights_;
};

struct ReplayResult {
  std::vector<MatchRecord> matches;       // annotated with elo_*_before
  std::map<TeamId, double> final_ratings;
};

// Replays `matches` (chronological) from the seed ratings, annotating every
// match with both teams' rating immediately before kick-off.
ReplayResult replay_history(std::span<const EloRating> seeds, std::vector<MatchRecord> matches,
                            const KTable& k_table);

}  // namespace zigpcast
