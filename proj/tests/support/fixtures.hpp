#pragma once

#include <string>
#include <vector>

#include "zigpcast/match_forecast.hpp"
#include "zigpcast/regression.hpp"

namespace fixtures {

inline zigpcast::RegressionFit fit_of(std::vector<double> alpha, double beta, double gamma_log) {
  zigpcast::RegressionFit f;
  f.coefficients = {std::move(alpha), beta, gamma_log};
  f.converged = true;
  return f;
}

// Reference coefficients for France v Germany in Munich (France Elo 2087,
// Germany Elo 1936). The dispersion pre-parameters were not published; any
// value leaves the checked quantities unchanged.
inline constexpr double kFranceElo = 2087.0;
inline constexpr double kGermanyElo = 1936.0;

inline zigpcast::TeamModelSet france_germany() {
  zigpcast::TeamModel france;
  france.team = "France";
  // Location enters as -1 for France in Germany, so the positive sign here
  // yields the published exp(... - 0.2361780).
  france.attack = fit_of({1.895766, -0.0007002232, 0.2361780}, -1.0, -3.057658);
  france.defense = fit_of({-2.0, 0.001, -0.1}, -1.0, -3.0);
  france.nested = fit_of({1.0, -0.0003, 0.1, -0.05}, -1.0, -3.0);

  zigpcast::TeamModel germany;
  germany.team = "Germany";
  germany.attack = fit_of({1.5, -0.0005, 0.2}, -1.2, -3.0);
  germany.defense = fit_of({-3.886702, 0.002203437, -0.02433679}, -1.2, -5.519051);
  // (intercept, opponent Elo, location, opponent goals)
  germany.nested = fit_of({3.340300, -0.0014539752, 0.21633103, -0.089635003}, -1.2, -4.0);

  zigpcast::TeamModelSet set;
  set.insert(france);
  set.insert(germany);
  return set;
}

inline zigpcast::MatchContext france_germany_in_munich() {
  return {"France", "Germany", kFranceElo, kGermanyElo, "Germany"};
}

// Generic team whose strength scales with its Elo.
inline zigpcast::TeamModel elo_team(const std::string& name, double beta = -1.5, double gamma = -3.0) {
  zigpcast::TeamModel m;
  m.team = name;
  m.attack = fit_of({2.6, -0.0012, 0.15}, beta, gamma);
  m.defense = fit_of({-3.2, 0.0018, -0.15}, beta, gamma);
  m.nested = fit_of({2.4, -0.0011, 0.15, -0.05}, beta, gamma);
  return m;
}

}  // namespace fixtures
