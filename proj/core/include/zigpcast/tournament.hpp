#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zigpcast/date.hpp"
#include "zigpcast/match_forecast.hpp"
#include "zigpcast/random.hpp"

namespace zigpcast {

enum class Stage { Group, RoundOf16, QuarterFinal, SemiFinal, Final };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& text);

// Fixture slots:
//   group stage   team names
//   knockout      "1A" / "2C"  group winner / runner-up
//                 "3@1B"      third-placed team allocated against the winner of group B
//                 "W37"       winner of match 37
struct Fixture {
  int match_id = 0;
  Stage stage = Stage::Group;
  char group = 0;  // 'A'..'F' for group fixtures
  std::string slot_a;
  std::string slot_b;
  std::string venue_country;
  Date date;
};

// Which third-placed team faces which group winner, per combination of the
// groups whose thirds qualified.
struct AllocationTable {
  std::vector<std::string> winner_slots;          // e.g. {"1B", "1C", "1E", "1F"}
  std::map<std::string, std::string> assignment;  // "ACDF" -> "FDCA" (group of the third, per column)
};

// Validated 24-team tournament: six groups of four, four best thirds,
// knockout bracket from the round of 16 to the final.
class TournamentPlan {
 public:
  TournamentPlan(std::vector<Fixture> fixtures, AllocationTable allocation);

  const std::vector<char>& groups() const { return groups_; }
  const std::vector<TeamId>& group_teams(char group) const;
  std::span<const Fixture> group_fixtures(char group) const;
  std::span<const Fixture> knockout_fixtures() const { return knockout_; }
  const AllocationTable& allocation() const { return allocation_; }
  const std::vector<TeamId>& teams() const { return teams_; }
  char group_of(const TeamId& team) const;
  std::size_t qualified_thirds() const { return allocation_.winner_slots.size(); }

 private:
  std::vector<char> groups_;
  std::map<char, std::vector<TeamId>> group_teams_;
  std::map<char, std::vector<Fixture>> group_fixtures_;
  std::vector<Fixture> knockout_;
  AllocationTable allocation_;
  std::vector<TeamId> teams_;
  std::map<TeamId, char> team_group_;
};

// Produces a 90-minute (or extra-time, via mu_scale) score for a match.
class MatchSampler {
 public:
  virtual ~MatchSampler() = default;
  virtual Score sample(const MatchContext& ctx, RandomStream& rng, double mu_scale) const = 0;
  virtual bool covers(const TeamId& team) const = 0;
};

class NestedZigpSampler final : public MatchSampler {
 public:
  explicit NestedZigpSampler(const TeamModelSet& models) : models_(models) {}
  Score sample(const MatchContext& ctx, RandomStream& rng, double mu_scale) const override {
    return sample_match(models_, ctx, rng, mu_scale);
  }
  bool covers(const TeamId& team) const override { return models_.contains(team); }

 private:
  const TeamModelSet& models_;
};

using LiveElo = std::map<TeamId, double>;

struct TournamentOptions {
  double k_weight = 50.0;
  double extra_time_scale = 1.0 / 3.0;
};

struct GroupMatch {
  TeamId team_a;
  TeamId team_b;
  Score score;
};

struct GroupRecord {
  int played = 0;
  int wins = 0;
  int draws = 0;
  int losses = 0;
  int goals_for = 0;
  int goals_against = 0;

  int points() const { return 3 * wins + draws; }
  int goal_diff() const { return goals_for - goals_against; }
};

struct GroupState {
  char group = 0;
  std::vector<TeamId> teams;
  std::vector<GroupMatch> matches;

  // Records over all matches, or only matches among `subset`.
  std::map<TeamId, GroupRecord> table() const;
  std::map<TeamId, GroupRecord> table_among(std::span<const TeamId> subset) const;
};

// Plays the group's fixtures in order, updating live Elo after each match.
GroupState simulate_group(const TournamentPlan& plan, char group, const MatchSampler& sampler, LiveElo& live_elo,
                          RandomStream& rng, const TournamentOptions& options = {});

// Points; head-to-head points, goal difference and goals among tied teams
// (reapplied to any smaller tied subset); overall goal difference and goals;
// live Elo; drawing of lots from `rng`.
std::vector<TeamId> rank_group(const GroupState& state, const LiveElo& live_elo, RandomStream& rng);

struct ThirdPlaced {
  char group = 0;
  TeamId team;
  GroupRecord record;
};

struct ThirdsSelection {
  std::vector<ThirdPlaced> ranking;  // best first, one entry per group
  std::string qualified_groups;      // sorted letters of the qualifying thirds
};

// Ranks the third-placed teams by points, goal difference, goals, live Elo,
// lots; the best `count` qualify.
ThirdsSelection select_best_thirds(std::span<const GroupState> states,
                                   const std::map<char, std::vector<TeamId>>& rankings, const LiveElo& live_elo,
                                   RandomStream& rng, std::size_t count = 4);

struct Pairing {
  int match_id = 0;
  TeamId team_a;
  TeamId team_b;
  std::string venue_country;
};

// Resolves the round-of-16 slots from group rankings and the qualified
// thirds. Throws ConfigError when the allocation table lacks the combination.
std::vector<Pairing> allocate_r16(const TournamentPlan& plan, const std::map<char, std::vector<TeamId>>& rankings,
                                  const std::string& qualified_groups);

struct KnockoutResult {
  TeamId winner;
  TeamId loser;
  Score regulation;
  std::optional<Score> extra_time;
  bool shootout = false;
  bool shootout_won_by_a = false;
};

// 90 minutes; extra time with both mu scaled when drawn; then a shootout won
// by team_a with probability expected_score(elo_a, elo_b). Live Elo is
// updated from the 90-minute plus extra-time aggregate.
KnockoutResult simulate_knockout_match(const Pairing& pairing, const MatchSampler& sampler, LiveElo& live_elo,
                                       RandomStream& rng, const TournamentOptions& options = {});

enum class StageReached { GroupStage, RoundOf16, QuarterFinal, SemiFinal, Final, Champion };

struct TeamResult {
  char group = 0;
  int group_position = 0;
  bool third_qualified = false;
  StageReached furthest = StageReached::GroupStage;
};

struct TournamentOutcome {
  std::map<TeamId, TeamResult> teams;
  std::map<char, std::vector<TeamId>> group_rankings;
  std::string qualified_third_groups;
  TeamId champion;
  LiveElo final_elo;
};

// One complete tournament; live Elo starts from `base_elo`.
TournamentOutcome run_tournament(const TournamentPlan& plan, const MatchSampler& sampler, const LiveElo& base_elo,
                                 RandomStream& rng, const TournamentOptions& options = {});

struct TeamCounters {
  std::uint64_t group_first = 0;
  std::uint64_t group_second = 0;
  std::uint64_t third_qualified = 0;
  std::uint64_t eliminated_group_stage = 0;
  std::uint64_t reached_r16 = 0;
  std::uint64_t reached_qf = 0;
  std::uint64_t reached_sf = 0;
  std::uint64_t reached_final = 0;
  std::uint64_t champion = 0;

  TeamCounters& operator+=(const TeamCounters& other);
  friend bool operator==(const TeamCounters&, const TeamCounters&) = default;
};

struct GroupProbabilityRow {
  char group = 0;
  TeamId team;
  double first = 0, second = 0, third_qualified = 0, eliminated = 0;
  double se_first = 0, se_second = 0, se_third_qualified = 0, se_eliminated = 0;
};

struct StageProbabilityRow {
  TeamId team;
  double champion = 0, final = 0, semifinal = 0, quarterfinal = 0, last16 = 0;
  double se_champion = 0, se_final = 0, se_semifinal = 0, se_quarterfinal = 0, se_last16 = 0;
};

// Integer counters over Monte Carlo runs. Merging is exact and commutative.
class SimulationAggregate {
 public:
  SimulationAggregate() = default;
  explicit SimulationAggregate(const TournamentPlan& plan);

  void add(const TournamentOutcome& outcome);
  void merge(const SimulationAggregate& other);

  std::uint64_t run_count() const { return runs_; }
  const std::map<TeamId, TeamCounters>& counters() const { return counters_; }
  const TeamCounters& at(const TeamId& team) const;
  char group_of(const TeamId& team) const { return groups_.at(team); }

  // Rows ordered by group, then by probability of winning the group.
  std::vector<GroupProbabilityRow> group_table() const;
  // Rows ordered by champion probability, descending.
  std::vector<StageProbabilityRow> stage_table() const;

  friend bool operator==(const SimulationAggregate&, const SimulationAggregate&) = default;

 private:
  std::map<TeamId, TeamCounters> counters_;
  std::map<TeamId, char> groups_;
  std::uint64_t runs_ = 0;
};

struct MonteCarloOptions {
  std::uint64_t n_runs = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  TournamentOptions tournament;
};

// Run i draws from RandomStream::for_stream(seed, i), so the aggregate does
// not depend on the number of workers. Missing models or ratings are
// reported before any run starts.
SimulationAggregate monte_carlo(const TournamentPlan& plan, const MatchSampler& sampler, const LiveElo& base_elo,
                                const MonteCarloOptions& options);

}  // namespace zigpcast
