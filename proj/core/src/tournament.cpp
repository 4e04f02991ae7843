#include "zigpcast/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "zigpcast/elo.hpp"
#include "zigpcast/errors.hpp"

namespace zigpcast {

namespace {

constexpr std::size_t kGroups = 6;
constexpr std::size_t kTeamsPerGroup = 4;

struct SlotRef {
  enum class Kind { Team, GroupPosition, Third, Winner } kind = Kind::Team;
  int position = 0;
  char group = 0;
  int match_id = 0;
  std::string winner_slot;  // for Third: "1B"
};

bool is_group_position(const std::string& s) {
  return s.size() == 2 && (s[0] == '1' || s[0] == '2') && s[1] >= 'A' && s[1] <= 'Z';
}

SlotRef parse_knockout_slot(const std::string& s, int match_id) {
  SlotRef ref;
  if (is_group_position(s)) {
    ref.kind = SlotRef::Kind::GroupPosition;
    ref.position = s[0] - '0';
    ref.group = s[1];
    return ref;
  }
  if (s.size() == 4 && s.starts_with("3@") && is_group_position(s.substr(2)) && s[2] == '1') {
    ref.kind = SlotRef::Kind::Third;
    ref.winner_slot = s.substr(2);
    return ref;
  }
  if (s.size() >= 2 && s[0] == 'W') {
    int id = 0;
    auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), id);
    if (ec == std::errc{} && ptr == s.data() + s.size()) {
      ref.kind = SlotRef::Kind::Winner;
      ref.match_id = id;
      return ref;
    }
  }
  throw ConfigError(fmt::format("match {}: unrecognised knockout slot '{}' (expected 1X, 2X, 3@1X or W<match>)",
                                match_id, s));
}

int stage_rank(Stage s) { return static_cast<int>(s); }

std::size_t expected_fixtures(Stage s) {
  switch (s) {
    case Stage::Group: return kGroups * 6;
    case Stage::RoundOf16: return 8;
    case Stage::QuarterFinal: return 4;
    case Stage::SemiFinal: return 2;
    case Stage::Final: return 1;
  }
  return 0;
}

// Draws one uniform key per team (in the given order) and sorts by it.
void order_by_lots(std::vector<TeamId>& teams, RandomStream& rng) {
  std::vector<std::pair<double, TeamId>> keyed;
  for (auto& t : teams) keyed.emplace_back(rng.uniform(), t);
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < teams.size(); ++i) teams[i] = keyed[i].second;
}

// Sorts `items` by descending key, then resolves exact key ties by lots.
template <typename Key>
void sort_with_lots(std::vector<TeamId>& items, Key key, RandomStream& rng) {
  std::sort(items.begin(), items.end());
  std::stable_sort(items.begin(), items.end(), [&](const TeamId& x, const TeamId& y) { return key(x) > key(y); });
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i + 1;
    while (j < items.size() && key(items[j]) == key(items[i])) ++j;
    if (j - i > 1) {
      std::vector<TeamId> tied(items.begin() + static_cast<long>(i), items.begin() + static_cast<long>(j));
      order_by_lots(tied, rng);
      std::copy(tied.begin(), tied.end(), items.begin() + static_cast<long>(i));
    }
    i = j;
  }
}

class GroupRanker {
 public:
  GroupRanker(const GroupState& state, const LiveElo& elo, RandomStream& rng)
      : state_(state), elo_(elo), rng_(rng), overall_(state.table()) {}

  std::vector<TeamId> rank() {
    std::vector<TeamId> teams = state_.teams;
    std::sort(teams.begin(), teams.end());
    std::stable_sort(teams.begin(), teams.end(), [&](const TeamId& x, const TeamId& y) {
      return overall_.at(x).points() > overall_.at(y).points();
    });
    std::vector<TeamId> out;
    for (std::size_t i = 0; i < teams.size();) {
      std::size_t j = i + 1;
      while (j < teams.size() && overall_.at(teams[j]).points() == overall_.at(teams[i]).points()) ++j;
      auto block = resolve({teams.begin() + static_cast<long>(i), teams.begin() + static_cast<long>(j)});
      out.insert(out.end(), block.begin(), block.end());
      i = j;
    }
    return out;
  }

 private:
  std::vector<TeamId> resolve(std::vector<TeamId> block) {
    if (block.size() <= 1) return block;
    const auto h2h = state_.table_among(block);
    auto key = [&](const TeamId& t) {
      const auto& r = h2h.at(t);
      return std::tuple{r.points(), r.goal_diff(), r.goals_for};
    };
    std::sort(block.begin(), block.end());
    std::stable_sort(block.begin(), block.end(), [&](const TeamId& x, const TeamId& y) { return key(x) > key(y); });

    std::vector<std::vector<TeamId>> runs;
    for (std::size_t i = 0; i < block.size();) {
      std::size_t j = i + 1;
      while (j < block.size() && key(block[j]) == key(block[i])) ++j;
      runs.emplace_back(block.begin() + static_cast<long>(i), block.begin() + static_cast<long>(j));
      i = j;
    }
    if (runs.size() == 1) return overall_then_lots(std::move(block));
    std::vector<TeamId> out;
    for (auto& run : runs) {
      auto part = resolve(std::move(run));
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  std::vector<TeamId> overall_then_lots(std::vector<TeamId> block) {
    sort_with_lots(
        block,
        [&](const TeamId& t) {
          const auto& r = overall_.at(t);
          return std::tuple{r.goal_diff(), r.goals_for, elo_.at(t)};
        },
        rng_);
    return block;
  }

  const GroupState& state_;
  const LiveElo& elo_;
  RandomStream& rng_;
  std::map<TeamId, GroupRecord> overall_;
};

void apply_result(GroupRecord& r, int gf, int ga) {
  ++r.played;
  r.goals_for += gf;
  r.goals_against += ga;
  if (gf > ga) ++r.wins;
  else if (gf == ga) ++r.draws;
  else ++r.losses;
}

void update_live_elo(LiveElo& live, const TeamId& a, const TeamId& b, Score total, double k) {
  const double elo_a = live.at(a);
  const double elo_b = live.at(b);
  live[a] = update({elo_a, elo_b, k, total.a, total.b});
  live[b] = update({elo_b, elo_a, k, total.b, total.a});
}

}  // namespace

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::Group: return "GROUP";
    case Stage::RoundOf16: return "R16";
    case Stage::QuarterFinal: return "QF";
    case Stage::SemiFinal: return "SF";
    case Stage::Final: return "FINAL";
  }
  return "?";
}

Stage stage_from_string(const std::string& text) {
  if (text == "GROUP") return Stage::Group;
  if (text == "R16") return Stage::RoundOf16;
  if (text == "QF") return Stage::QuarterFinal;
  if (text == "SF") return Stage::SemiFinal;
  if (text == "FINAL") return Stage::Final;
  throw ConfigError(fmt::format("unknown stage '{}' (GROUP, R16, QF, SF, FINAL)", text));
}

TournamentPlan::TournamentPlan(std::vector<Fixture> fixtures, AllocationTable allocation)
    : allocation_(std::move(allocation)) {
  std::set<int> ids;
  std::map<Stage, std::size_t> per_stage;
  for (const auto& f : fixtures) {
    if (!ids.insert(f.match_id).second) throw ConfigError(fmt::format("duplicate match id {}", f.match_id));
    ++per_stage[f.stage];
    if (f.stage == Stage::Group) {
      if (f.group < 'A' || f.group > 'Z') {
        throw ConfigError(fmt::format("group fixture {} has no group letter", f.match_id));
      }
      if (f.slot_a.empty() || f.slot_b.empty() || f.slot_a == f.slot_b) {
        throw ConfigError(fmt::format("group fixture {} needs two distinct teams", f.match_id));
      }
      group_fixtures_[f.group].push_back(f);
    } else {
      knockout_.push_back(f);
    }
  }
  for (Stage s : {Stage::Group, Stage::RoundOf16, Stage::QuarterFinal, Stage::SemiFinal, Stage::Final}) {
    if (per_stage[s] != expected_fixtures(s)) {
      throw ConfigError(fmt::format("expected {} {} fixtures, found {}", expected_fixtures(s), to_string(s),
                                    per_stage[s]));
    }
  }
  if (group_fixtures_.size() != kGroups) {
    throw ConfigError(fmt::format("expected {} groups, found {}", kGroups, group_fixtures_.size()));
  }

  for (auto& [g, list] : group_fixtures_) {
    groups_.push_back(g);
    std::set<TeamId> members;
    std::set<std::pair<TeamId, TeamId>> pairs;
    for (const auto& f : list) {
      members.insert(f.slot_a);
      members.insert(f.slot_b);
      auto key = std::minmax(f.slot_a, f.slot_b);
      if (!pairs.emplace(key.first, key.second).second) {
        throw ConfigError(fmt::format("group {}: {} and {} are scheduled twice", g, f.slot_a, f.slot_b));
      }
    }
    if (members.size() != kTeamsPerGroup || list.size() != 6) {
      throw ConfigError(fmt::format("group {} must be a round robin of {} teams ({} teams, {} fixtures)", g,
                                    kTeamsPerGroup, members.size(), list.size()));
    }
    for (const auto& t : members) {
      if (!team_group_.emplace(t, g).second) {
        throw ConfigError(fmt::format("team '{}' appears in groups {} and {}", t, team_group_.at(t), g));
      }
      teams_.push_back(t);
    }
    group_teams_[g] = {members.begin(), members.end()};
    std::stable_sort(list.begin(), list.end(), [](const Fixture& x, const Fixture& y) {
      return std::tie(x.date, x.match_id) < std::tie(y.date, y.match_id);
    });
  }

  std::sort(knockout_.begin(), knockout_.end(), [](const Fixture& x, const Fixture& y) {
    return std::pair{stage_rank(x.stage), x.match_id} < std::pair{stage_rank(y.stage), y.match_id};
  });

  // Allocation table.
  const std::size_t thirds = expected_fixtures(Stage::RoundOf16) * 2 - kGroups * 2;
  if (allocation_.winner_slots.size() != thirds) {
    throw ConfigError(fmt::format("allocation table must have {} winner columns, found {}", thirds,
                                  allocation_.winner_slots.size()));
  }
  for (const auto& w : allocation_.winner_slots) {
    if (!is_group_position(w) || w[0] != '1' || !group_teams_.contains(w[1])) {
      throw ConfigError(fmt::format("allocation column '{}' is not a group-winner slot", w));
    }
  }
  std::string letters(groups_.begin(), groups_.end());
  std::vector<std::string> combos;
  for (unsigned mask = 0; mask < (1u << kGroups); ++mask) {
    if (std::popcount(mask) != static_cast<int>(thirds)) continue;
    std::string c;
    for (std::size_t i = 0; i < kGroups; ++i)
      if (mask & (1u << i)) c += letters[i];
    combos.push_back(c);
  }
  for (const auto& [key, value] : allocation_.assignment) {
    if (std::find(combos.begin(), combos.end(), key) == combos.end()) {
      throw ConfigError(fmt::format("allocation row '{}' is not a sorted combination of {} groups", key, thirds));
    }
    std::string a = key, b = value;
    std::sort(b.begin(), b.end());
    if (a != b) throw ConfigError(fmt::format("allocation row '{}' assigns groups '{}'", key, value));
    for (std::size_t c = 0; c < value.size(); ++c) {
      if (value[c] == allocation_.winner_slots[c][1]) {
        throw ConfigError(fmt::format("allocation row '{}' pairs the third of group {} with its own winner", key,
                                      value[c]));
      }
    }
  }
  std::vector<std::string> missing;
  for (const auto& c : combos)
    if (!allocation_.assignment.contains(c)) missing.push_back(c);
  if (!missing.empty()) {
    throw ConfigError(fmt::format("allocation table is missing {} of {} combinations (e.g. {})", missing.size(),
                                  combos.size(), missing.front()));
  }

  // Knockout wiring.
  std::map<std::string, int> position_uses;
  std::map<int, int> winner_uses;
  std::map<int, Stage> stage_of;
  for (const auto& f : knockout_) stage_of[f.match_id] = f.stage;
  for (const auto& f : knockout_) {
    for (const auto* slot : {&f.slot_a, &f.slot_b}) {
      const SlotRef ref = parse_knockout_slot(*slot, f.match_id);
      const bool first_round = f.stage == Stage::RoundOf16;
      if (ref.kind == SlotRef::Kind::Winner) {
        auto it = stage_of.find(ref.match_id);
        if (first_round || it == stage_of.end() || stage_rank(it->second) != stage_rank(f.stage) - 1) {
          throw ConfigError(fmt::format("match {}: slot '{}' does not refer to a match of the previous round",
                                        f.match_id, *slot));
        }
        ++winner_uses[ref.match_id];
      } else {
        if (!first_round) {
          throw ConfigError(fmt::format("match {}: group slot '{}' outside the round of 16", f.match_id, *slot));
        }
        if (ref.kind == SlotRef::Kind::GroupPosition && !group_teams_.contains(ref.group)) {
          throw ConfigError(fmt::format("match {}: slot '{}' names an unknown group", f.match_id, *slot));
        }
        if (ref.kind == SlotRef::Kind::Third &&
            std::find(allocation_.winner_slots.begin(), allocation_.winner_slots.end(), ref.winner_slot) ==
                allocation_.winner_slots.end()) {
          throw ConfigError(fmt::format("match {}: slot '{}' has no allocation column", f.match_id, *slot));
        }
        ++position_uses[*slot];
      }
    }
  }
  for (char g : groups_) {
    for (char pos : {'1', '2'}) {
      const std::string s{pos, g};
      if (position_uses[s] != 1) throw ConfigError(fmt::format("slot '{}' must appear exactly once in the round of 16", s));
    }
  }
  for (const auto& w : allocation_.winner_slots) {
    if (position_uses["3@" + w] != 1) {
      throw ConfigError(fmt::format("slot '3@{}' must appear exactly once in the round of 16", w));
    }
  }
  for (const auto& f : knockout_) {
    const int uses = winner_uses[f.match_id];
    if (f.stage == Stage::Final ? uses != 0 : uses != 1) {
      throw ConfigError(fmt::format("winner of match {} is referenced {} times", f.match_id, uses));
    }
  }
}

const std::vector<TeamId>& TournamentPlan::group_teams(char group) const {
  auto it = group_teams_.find(group);
  if (it == group_teams_.end()) throw ConfigError(fmt::format("unknown group '{}'", group));
  return it->second;
}

std::span<const Fixture> TournamentPlan::group_fixtures(char group) const {
  auto it = group_fixtures_.find(group);
  if (it == group_fixtures_.end()) throw ConfigError(fmt::format("unknown group '{}'", group));
  return it->second;
}

char TournamentPlan::group_of(const TeamId& team) const {
  auto it = team_group_.find(team);
  if (it == team_group_.end()) throw ConfigError(fmt::format("team '{}' is not in the tournament", team));
  return it->second;
}

std::map<TeamId, GroupRecord> GroupState::table() const { return table_among(teams); }

std::map<TeamId, GroupRecord> GroupState::table_among(std::span<const TeamId> subset) const {
  std::map<TeamId, GroupRecord> out;
  for (const auto& t : subset) out[t];
  for (const auto& m : matches) {
    auto a = out.find(m.team_a);
    auto b = out.find(m.team_b);
    if (a == out.end() || b == out.end()) continue;
    apply_result(a->second, m.score.a, m.score.b);
    apply_result(b->second, m.score.b, m.score.a);
  }
  return out;
}

GroupState simulate_group(const TournamentPlan& plan, char group, const MatchSampler& sampler, LiveElo& live_elo,
                          RandomStream& rng, const TournamentOptions& options) {
  GroupState state;
  state.group = group;
  state.teams = plan.group_teams(group);
  for (const auto& f : plan.group_fixtures(group)) {
    const MatchContext ctx{f.slot_a, f.slot_b, live_elo.at(f.slot_a), live_elo.at(f.slot_b), f.venue_country};
    const Score s = sampler.sample(ctx, rng, 1.0);
    state.matches.push_back({f.slot_a, f.slot_b, s});
    update_live_elo(live_elo, f.slot_a, f.slot_b, s, options.k_weight);
  }
  return state;
}

std::vector<TeamId> rank_group(const GroupState& state, const LiveElo& live_elo, RandomStream& rng) {
  return GroupRanker(state, live_elo, rng).rank();
}

ThirdsSelection select_best_thirds(std::span<const GroupState> states,
                                   const std::map<char, std::vector<TeamId>>& rankings, const LiveElo& live_elo,
                                   RandomStream& rng, std::size_t count) {
  std::map<TeamId, ThirdPlaced> thirds;
  for (const auto& st : states) {
    const auto& order = rankings.at(st.group);
    if (order.size() < 3) throw ConfigError(fmt::format("group {} has fewer than three teams", st.group));
    const TeamId& t = order[2];
    thirds[t] = {st.group, t, st.table().at(t)};
  }
  if (count > thirds.size()) throw ConfigError("more qualifying thirds requested than groups");
  std::vector<TeamId> ids;
  for (const auto& [t, _] : thirds) ids.push_back(t);
  sort_with_lots(
      ids,
      [&](const TeamId& t) {
        const auto& r = thirds.at(t).record;
        return std::tuple{r.points(), r.goal_diff(), r.goals_for, live_elo.at(t)};
      },
      rng);
  ThirdsSelection sel;
  for (const auto& t : ids) sel.ranking.push_back(thirds.at(t));
  for (std::size_t i = 0; i < count; ++i) sel.qualified_groups += sel.ranking[i].group;
  std::sort(sel.qualified_groups.begin(), sel.qualified_groups.end());
  return sel;
}

std::vector<Pairing> allocate_r16(const TournamentPlan& plan, const std::map<char, std::vector<TeamId>>& rankings,
                                  const std::string& qualified_groups) {
  const auto& table = plan.allocation();
  auto row = table.assignment.find(qualified_groups);
  if (row == table.assignment.end()) {
    throw ConfigError(fmt::format("allocation table has no row for qualified thirds '{}'", qualified_groups));
  }
  auto resolve = [&](const std::string& slot, int match_id) -> TeamId {
    const SlotRef ref = parse_knockout_slot(slot, match_id);
    if (ref.kind == SlotRef::Kind::GroupPosition) {
      return rankings.at(ref.group).at(static_cast<std::size_t>(ref.position - 1));
    }
    if (ref.kind == SlotRef::Kind::Third) {
      const auto col = std::find(table.winner_slots.begin(), table.winner_slots.end(), ref.winner_slot) -
                       table.winner_slots.begin();
      return rankings.at(row->second[static_cast<std::size_t>(col)]).at(2);
    }
    throw ConfigError(fmt::format("match {}: slot '{}' cannot be resolved from the group stage", match_id, slot));
  };
  std::vector<Pairing> out;
  for (const auto& f : plan.knockout_fixtures()) {
    if (f.stage != Stage::RoundOf16) continue;
    out.push_back({f.match_id, resolve(f.slot_a, f.match_id), resolve(f.slot_b, f.match_id), f.venue_country});
  }
  return out;
}

KnockoutResult simulate_knockout_match(const Pairing& pairing, const MatchSampler& sampler, LiveElo& live_elo,
                                       RandomStream& rng, const TournamentOptions& options) {
  const double elo_a = live_elo.at(pairing.team_a);
  const double elo_b = live_elo.at(pairing.team_b);
  const MatchContext ctx{pairing.team_a, pairing.team_b, elo_a, elo_b, pairing.venue_country};

  KnockoutResult r;
  r.regulation = sampler.sample(ctx, rng, 1.0);
  Score total = r.regulation;
  if (total.a == total.b) {
    r.extra_time = sampler.sample(ctx, rng, options.extra_time_scale);
    total.a += r.extra_time->a;
    total.b += r.extra_time->b;
  }
  bool a_wins = total.a > total.b;
  if (total.a == total.b) {
    r.shootout = true;
    a_wins = rng.uniform() < expected_score(elo_a, elo_b);
    r.shootout_won_by_a = a_wins;
  }
  r.winner = a_wins ? pairing.team_a : pairing.team_b;
  r.loser = a_wins ? pairing.team_b : pairing.team_a;
  update_live_elo(live_elo, pairing.team_a, pairing.team_b, total, options.k_weight);
  return r;
}

TournamentOutcome run_tournament(const TournamentPlan& plan, const MatchSampler& sampler, const LiveElo& base_elo,
                                 RandomStream& rng, const TournamentOptions& options) {
  TournamentOutcome out;
  LiveElo live = base_elo;
  std::vector<GroupState> states;
  for (char g : plan.groups()) {
    states.push_back(simulate_group(plan, g, sampler, live, rng, options));
    out.group_rankings[g] = rank_group(states.back(), live, rng);
  }
  const auto thirds = select_best_thirds(states, out.group_rankings, live, rng, plan.qualified_thirds());
  out.qualified_third_groups = thirds.qualified_groups;

  for (const auto& [g, order] : out.group_rankings) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto& tr = out.teams[order[i]];
      tr.group = g;
      tr.group_position = static_cast<int>(i) + 1;
      tr.third_qualified = i == 2 && thirds.qualified_groups.find(g) != std::string::npos;
      tr.furthest = StageReached::GroupStage;
    }
  }

  std::map<int, TeamId> winners;
  const auto r16 = allocate_r16(plan, out.group_rankings, thirds.qualified_groups);
  for (const auto& f : plan.knockout_fixtures()) {
    Pairing pairing;
    if (f.stage == Stage::RoundOf16) {
      pairing = *std::find_if(r16.begin(), r16.end(), [&](const Pairing& p) { return p.match_id == f.match_id; });
      out.teams[pairing.team_a].furthest = StageReached::RoundOf16;
      out.teams[pairing.team_b].furthest = StageReached::RoundOf16;
    } else {
      pairing = {f.match_id, winners.at(parse_knockout_slot(f.slot_a, f.match_id).match_id),
                 winners.at(parse_knockout_slot(f.slot_b, f.match_id).match_id), f.venue_country};
    }
    const auto result = simulate_knockout_match(pairing, sampler, live, rng, options);
    winners[f.match_id] = result.winner;
    out.teams[result.winner].furthest = static_cast<StageReached>(stage_rank(f.stage) + 1);
    if (f.stage == Stage::Final) out.champion = result.winner;
  }
  out.final_elo = std::move(live);
  return out;
}

TeamCounters& TeamCounters::operator+=(const TeamCounters& o) {
  group_first += o.group_first;
  group_second += o.group_second;
  third_qualified += o.third_qualified;
  eliminated_group_stage += o.eliminated_group_stage;
  reached_r16 += o.reached_r16;
  reached_qf += o.reached_qf;
  reached_sf += o.reached_sf;
  reached_final += o.reached_final;
  champion += o.champion;
  return *this;
}

SimulationAggregate::SimulationAggregate(const TournamentPlan& plan) {
  for (const auto& t : plan.teams()) {
    counters_[t];
    groups_[t] = plan.group_of(t);
  }
}

void SimulationAggregate::add(const TournamentOutcome& outcome) {
  for (const auto& [team, r] : outcome.teams) {
    auto& c = counters_[team];
    groups_[team] = r.group;
    if (r.group_position == 1) ++c.group_first;
    else if (r.group_position == 2) ++c.group_second;
    else if (r.third_qualified) ++c.third_qualified;
    else ++c.eliminated_group_stage;
    if (r.furthest >= StageReached::RoundOf16) ++c.reached_r16;
    if (r.furthest >= StageReached::QuarterFinal) ++c.reached_qf;
    if (r.furthest >= StageReached::SemiFinal) ++c.reached_sf;
    if (r.furthest >= StageReached::Final) ++c.reached_final;
    if (r.furthest == StageReached::Champion) ++c.champion;
  }
  ++runs_;
}

void SimulationAggregate::merge(const SimulationAggregate& other) {
  for (const auto& [team, c] : other.counters_) counters_[team] += c;
  for (const auto& [team, g] : other.groups_) groups_[team] = g;
  runs_ += other.runs_;
}

const TeamCounters& SimulationAggregate::at(const TeamId& team) const {
  auto it = counters_.find(team);
  if (it == counters_.end()) throw ConfigError(fmt::format("team '{}' not in the simulation aggregate", team));
  return it->second;
}

std::vector<GroupProbabilityRow> SimulationAggregate::group_table() const {
  const double n = static_cast<double>(std::max<std::uint64_t>(runs_, 1));
  auto prob = [n](std::uint64_t c) { return static_cast<double>(c) / n; };
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  std::vector<GroupProbabilityRow> rows;
  for (const auto& [team, c] : counters_) {
    GroupProbabilityRow r;
    r.group = groups_.at(team);
    r.team = team;
    r.first = prob(c.group_first);
    r.second = prob(c.group_second);
    r.third_qualified = prob(c.third_qualified);
    r.eliminated = prob(c.eliminated_group_stage);
    r.se_first = se(r.first);
    r.se_second = se(r.second);
    r.se_third_qualified = se(r.third_qualified);
    r.se_eliminated = se(r.eliminated);
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const GroupProbabilityRow& x, const GroupProbabilityRow& y) {
    if (x.group != y.group) return x.group < y.group;
    return counters_.at(x.team).group_first > counters_.at(y.team).group_first;
  });
  return rows;
}

std::vector<StageProbabilityRow> SimulationAggregate::stage_table() const {
  const double n = static_cast<double>(std::max<std::uint64_t>(runs_, 1));
  auto prob = [n](std::uint64_t c) { return static_cast<double>(c) / n; };
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  std::vector<StageProbabilityRow> rows;
  for (const auto& [team, c] : counters_) {
    StageProbabilityRow r;
    r.team = team;
    r.champion = prob(c.champion);
    r.final = prob(c.reached_final);
    r.semifinal = prob(c.reached_sf);
    r.quarterfinal = prob(c.reached_qf);
    r.last16 = prob(c.reached_r16);
    r.se_champion = se(r.champion);
    r.se_final = se(r.final);
    r.se_semifinal = se(r.semifinal);
    r.se_quarterfinal = se(r.quarterfinal);
    r.se_last16 = se(r.last16);
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const StageProbabilityRow& x, const StageProbabilityRow& y) {
    const auto& cx = counters_.at(x.team);
    const auto& cy = counters_.at(y.team);
    return std::tie(cx.champion, cx.reached_final, cx.reached_sf, cx.reached_qf, cx.reached_r16) >
           std::tie(cy.champion, cy.reached_final, cy.reached_sf, cy.reached_qf, cy.reached_r16);
  });
  return rows;
}

SimulationAggregate monte_carlo(const TournamentPlan& plan, const MatchSampler& sampler, const LiveElo& base_elo,
                                const MonteCarloOptions& options) {
  if (options.n_runs < 1) throw ConfigError("monte carlo needs at least one run");
  std::vector<std::string> missing_models, missing_elo;
  for (const auto& t : plan.teams()) {
    if (!sampler.covers(t)) missing_models.push_back(t);
    if (!base_elo.contains(t)) missing_elo.push_back(t);
  }
  if (!missing_models.empty()) {
    throw ConfigError(fmt::format("no match model for: {}", fmt::join(missing_models, ", ")));
  }
  if (!missing_elo.empty()) {
    throw ConfigError(fmt::format("no Elo rating for: {}", fmt::join(missing_elo, ", ")));
  }

  const auto workers = static_cast<std::size_t>(
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, options.workers)), 1, options.n_runs));
  std::vector<SimulationAggregate> partial(workers, SimulationAggregate(plan));
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<std::uint64_t> next{0};
  auto work = [&](std::size_t w) {
    try {
      for (std::uint64_t i = next++; i < options.n_runs; i = next++) {
        RandomStream rng = RandomStream::for_stream(options.seed, i);
        partial[w].add(run_tournament(plan, sampler, base_elo, rng, options.tournament));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SimulationAggregate total(plan);
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace zigpcast
