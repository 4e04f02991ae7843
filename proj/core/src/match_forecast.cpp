#include "zigpcast/match_forecast.hpp"

#include <array>

#include <fmt/format.h>

#include "zigpcast/errors.hpp"

namespace zigpcast {

int MatchContext::location_a() const {
  return neutral() ? 0 : location_indicator(team_a, team_b, venue_country);
}

int MatchContext::location_b() const {
  return neutral() ? 0 : location_indicator(team_b, team_a, venue_country);
}

bool MatchContext::a_is_stronger() const {
  if (elo_a != elo_b) return elo_a > elo_b;
  return team_a < team_b;
}

MatchContext MatchContext::ordered() const {
  if (a_is_stronger()) return *this;
  return MatchContext{team_b, team_a, elo_b, elo_a, venue_country};
}

const TeamModel& TeamModelSet::at(const TeamId& team) const {
  auto it = models_.find(team);
  if (it == models_.end()) throw ConfigError(fmt::format("no fitted model for team '{}'", team));
  return it->second;
}

void TeamModelSet::insert(TeamModel model) {
  auto team = model.team;
  models_.insert_or_assign(std::move(team), std::move(model));
}

ZigpParams stronger_params(const TeamModel& stronger, const TeamModel& weaker, const MatchContext& ordered) {
  const auto& attack = stronger.attack.coefficients;
  const auto& defense = weaker.defense.coefficients;
  const std::array<double, 3> attack_cov{1.0, ordered.elo_b, static_cast<double>(ordered.location_a())};
  const std::array<double, 3> defense_cov{1.0, ordered.elo_a, static_cast<double>(ordered.location_b())};
  ZigpParams p{0.5 * (attack.mu(attack_cov) + defense.mu(defense_cov)), 0.5 * (attack.phi() + defense.phi()),
               0.5 * (attack.omega() + defense.omega())};
  p.validate();
  return p;
}

ZigpParams weaker_params_given(const TeamModel& weaker, const MatchContext& ordered, int goals_stronger) {
  if (goals_stronger < 0) throw DomainError("goals of the stronger team must be non-negative");
  const auto& nested = weaker.nested.coefficients;
  const std::array<double, 4> cov{1.0, ordered.elo_a, static_cast<double>(ordered.location_b()),
                                  static_cast<double>(goals_stronger)};
  return nested.params(cov);
}

double ScoreGrid::win_a() const {
  double s = 0.0;
  for (int i = 0; i <= cap; ++i)
    for (int j = 0; j < i; ++j) s += at(i, j);
  return s;
}

double ScoreGrid::draw() const {
  double s = 0.0;
  for (int i = 0; i <= cap; ++i) s += at(i, i);
  return s;
}

double ScoreGrid::win_b() const {
  double s = 0.0;
  for (int i = 0; i <= cap; ++i)
    for (int j = i + 1; j <= cap; ++j) s += at(i, j);
  return s;
}

double ScoreGrid::over(double line) const {
  double s = 0.0;
  for (int i = 0; i <= cap; ++i)
    for (int j = 0; j <= cap; ++j)
      if (i + j > line) s += at(i, j);
  return s;
}

Score ScoreGrid::most_likely() const {
  Score best;
  double p = -1.0;
  for (int i = 0; i <= cap; ++i)
    for (int j = 0; j <= cap; ++j)
      if (at(i, j) > p) {
        p = at(i, j);
        best = {i, j};
      }
  return best;
}

ScoreGrid score_grid(const TeamModelSet& models, const MatchContext& ctx, int cap) {
  if (cap < 10) throw DomainError(fmt::format("score grid cap must be at least 10 (got {})", cap));
  const MatchContext ord = ctx.ordered();
  const bool swapped = !ctx.a_is_stronger();
  const TeamModel& strong = models.at(ord.team_a);
  const TeamModel& weak = models.at(ord.team_b);
  const ZigpParams first = stronger_params(strong, weak, ord);

  const auto side = static_cast<std::size_t>(cap + 1);
  ScoreGrid grid;
  grid.team_a = ctx.team_a;
  grid.team_b = ctx.team_b;
  grid.cap = cap;
  grid.probs.assign(side * side, 0.0);
  double total = 0.0;
  for (int i = 0; i <= cap; ++i) {
    const double p_i = pmf(first, i);
    const ZigpParams second = weaker_params_given(weak, ord, i);
    for (int j = 0; j <= cap; ++j) {
      const double p = p_i * pmf(second, j);
      const std::size_t idx = swapped ? static_cast<std::size_t>(j) * side + static_cast<std::size_t>(i)
                                      : static_cast<std::size_t>(i) * side + static_cast<std::size_t>(j);
      grid.probs[idx] = p;
      total += p;
    }
  }
  grid.mass_before_renormalization = total;
  for (double& p : grid.probs) p /= total;
  return grid;
}

Score sample_match(const TeamModelSet& models, const MatchContext& ctx, RandomStream& rng, double mu_scale) {
  const MatchContext ord = ctx.ordered();
  const TeamModel& strong = models.at(ord.team_a);
  const TeamModel& weak = models.at(ord.team_b);
  ZigpParams first = stronger_params(strong, weak, ord);
  first.mu *= mu_scale;
  const int goals_strong = sample(first, rng);
  ZigpParams second = weaker_params_given(weak, ord, goals_strong);
  second.mu *= mu_scale;
  const int goals_weak = sample(second, rng);
  if (ctx.a_is_stronger()) return {goals_strong, goals_weak};
  return {goals_weak, goals_strong};
}

}  // namespace zigpcast
