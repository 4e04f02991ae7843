#pragma once

#include <optional>
#include <string>

#include "zigpcast/date.hpp"

namespace zigpcast {

using TeamId = std::string;

// One historical international match as listed by the source. Both teams'
// perspectives are derived on demand; a match is never stored twice.
struct MatchRecord {
  Date date;
  TeamId team_a;
  TeamId team_b;
  int goals_a = 0;
  int goals_b = 0;
  std::string match_type;
  std::string venue_country;
  bool neutral = false;
  std::optional<double> elo_a_before;
  std::optional<double> elo_b_before;

  bool involves(const TeamId& team) const { return team == team_a || team == team_b; }
  const TeamId& opponent_of(const TeamId& team) const { return team == team_a ? team_b : team_a; }
  int goals_for(const TeamId& team) const { return team == team_a ? goals_a : goals_b; }
  int goals_against(const TeamId& team) const { return team == team_a ? goals_b : goals_a; }
  std::optional<double> elo_before(const TeamId& team) const {
    return team == team_a ? elo_a_before : elo_b_before;
  }
  bool has_elo() const { return elo_a_before.has_value() && elo_b_before.has_value(); }

  // +1 when `team` plays in its own country, -1 when the opponent does,
  // 0 otherwise. The neutral flag overrides the venue country.
  int location_for(const TeamId& team) const;
};

// Home indicator shared by historical records and forecasts.
int location_indicator(const TeamId& team, const TeamId& opponent, const std::string& venue_country);

}  // namespace zigpcast
