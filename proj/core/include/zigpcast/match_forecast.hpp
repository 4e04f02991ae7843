#pragma once

#include <map>
#include <string>
#include <vector>

#include "zigpcast/match_record.hpp"
#include "zigpcast/random.hpp"
#include "zigpcast/regression.hpp"
#include "zigpcast/zigp.hpp"

namespace zigpcast {

inline constexpr const char* kNeutralVenue = "NEUTRAL";
inline constexpr int kDefaultGridCap = 15;

struct MatchContext {
  TeamId team_a;
  TeamId team_b;
  double elo_a = 0.0;
  double elo_b = 0.0;
  // Country hosting the match, or "NEUTRAL" / empty.
  std::string venue_country;

  bool neutral() const { return venue_country.empty() || venue_country == kNeutralVenue; }
  int location_a() const;
  int location_b() const;

  // True if team_a is the stronger side: higher Elo, ties broken by the
  // lexicographically smaller team code.
  bool a_is_stronger() const;
  // Copy with the stronger team listed as team_a.
  MatchContext ordered() const;
};

struct Score {
  int a = 0;
  int b = 0;
  friend bool operator==(const Score&, const Score&) = default;
};

class TeamModelSet {
 public:
  TeamModelSet() = default;
  explicit TeamModelSet(std::map<TeamId, TeamModel> models) : models_(std::move(models)) {}

  const TeamModel& at(const TeamId& team) const;
  bool contains(const TeamId& team) const { return models_.contains(team); }
  void insert(TeamModel model);
  const std::map<TeamId, TeamModel>& models() const { return models_; }

 private:
  std::map<TeamId, TeamModel> models_;
};

// Goals of the stronger side: averages of its attack regression against the
// weaker side's Elo and the weaker side's defense regression against its own
// Elo, componentwise in (mu, phi, omega). `ordered` must have team_a stronger.
ZigpParams stronger_params(const TeamModel& stronger, const TeamModel& weaker, const MatchContext& ordered);

// Goals of the weaker side given the stronger side scored `goals_stronger`.
ZigpParams weaker_params_given(const TeamModel& weaker, const MatchContext& ordered, int goals_stronger);

struct ScoreGrid {
  TeamId team_a;
  TeamId team_b;
  int cap = kDefaultGridCap;
  std::vector<double> probs;  // (cap+1) x (cap+1), row = goals of team_a
  double mass_before_renormalization = 1.0;

  double at(int goals_a, int goals_b) const { return probs[static_cast<std::size_t>(goals_a * (cap + 1) + goals_b)]; }
  double win_a() const;
  double draw() const;
  double win_b() const;
  double over(double line) const;  // P[goals_a + goals_b > line]
  Score most_likely() const;
};

ScoreGrid score_grid(const TeamModelSet& models, const MatchContext& ctx, int cap = kDefaultGridCap);

// Two-stage draw: stronger side first, then the weaker side conditioned on
// it. `mu_scale` multiplies both mu parameters (extra time uses 1/3).
Score sample_match(const TeamModelSet& models, const MatchContext& ctx, RandomStream& rng, double mu_scale = 1.0);

}  // namespace zigpcast
