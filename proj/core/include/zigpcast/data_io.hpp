#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "zigpcast/date.hpp"
#include "zigpcast/elo.hpp"
#include "zigpcast/match_record.hpp"
#include "zigpcast/match_weights.hpp"
#include "zigpcast/metrics.hpp"
#include "zigpcast/tournament.hpp"

namespace zigpcast {

struct DateWindow {
  std::optional<Date> start;
  std::optional<Date> end;

  bool contains(Date d) const { return (!start || *start <= d) && (!end || d <= *end); }
};

// Key-value engine configuration:
//   half_period_days, reference_date, window_start, window_end, grid_cap,
//   tournament_k, extra_time_scale, k.<TYPE>, importance.<TYPE>
struct EngineConfig {
  KTable k_table = KTable::defaults();
  WeightConfig weights{1095, Date{}, WeightConfig::default_importance()};
  // Set when the configuration names a reference date; callers otherwise
  // derive one from the data.
  std::optional<Date> reference_date;
  DateWindow window;
  int grid_cap = 15;
  TournamentOptions tournament;

  std::set<std::string> match_types() const;
  void validate() const;
};

EngineConfig parse_config(std::string_view text, const std::string& source = "<config>");
EngineConfig load_config(const std::filesystem::path& path);

struct MatchLoad {
  std::vector<MatchRecord> matches;  // chronological
  std::vector<std::string> warnings;
};

// Columns: date, team_a, team_b, goals_a, goals_b, match_type, and optionally
// venue_country, neutral, elo_a_before, elo_b_before. Rows outside `window`
// are dropped; duplicates of (date, team_a, team_b) are rejected. When
// `valid_types` is given every match_type must belong to it.
MatchLoad load_matches(const std::filesystem::path& path, const DateWindow& window = {},
                       const std::set<std::string>* valid_types = nullptr);
MatchLoad parse_matches(std::string_view text, const std::string& source, const DateWindow& window = {},
                        const std::set<std::string>* valid_types = nullptr);

// Columns: team, elo, as_of.
std::vector<EloRating> load_ratings(const std::filesystem::path& path);
std::vector<EloRating> parse_ratings(std::string_view text, const std::string& source);
// Latest rating per team.
LiveElo latest_ratings(std::span<const EloRating> ratings);

// CSV (match_id, stage, group, slot_a, slot_b, venue_country, date) or a JSON
// array of objects with the same keys (chosen by the .json extension).
std::vector<Fixture> load_fixtures(const std::filesystem::path& path);
std::vector<Fixture> parse_fixtures_csv(std::string_view text, const std::string& source);
std::vector<Fixture> parse_fixtures_json(std::string_view text, const std::string& source);

// Columns: qualified, then one column per group-winner slot ("1B", ...).
AllocationTable load_allocation(const std::filesystem::path& path);
AllocationTable parse_allocation(std::string_view text, const std::string& source);

// Fixtures + allocation validated together.
TournamentPlan load_tournament(const std::filesystem::path& fixtures, const std::filesystem::path& allocation);

// Every tournament team must hold a rating.
void check_ratings_cover(const TournamentPlan& plan, const LiveElo& ratings);

// Columns: team, rank.
std::vector<RealizedResult> load_realized(const std::filesystem::path& path);
std::vector<RealizedResult> parse_realized(std::string_view text, const std::string& source);

// Columns: team, p1 .. p6. Rows off by no more than six-decimal rounding are
// renormalized.
std::vector<OutcomeDistribution> load_distributions(const std::filesystem::path& path);
std::vector<OutcomeDistribution> parse_distributions(std::string_view text, const std::string& source);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace zigpcast
