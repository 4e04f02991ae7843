#include "zigpcast/regression.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "zigpcast/optimizer.hpp"
#include "zigpcast/random.hpp"

namespace zigpcast {

namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct ObservationTerms {
  double ll = 0.0;
  double d_eta = 0.0;
  double d_beta = 0.0;
  double d_gamma = 0.0;
};

// log pmf of one observation and its derivatives with respect to the linear
// predictor eta = log mu, beta and gamma_log.
ObservationTerms observation_terms(int k, double eta, double beta, double gamma) {
  ObservationTerms t;
  const double mu = std::exp(eta);
  const double phi_minus_1 = std::exp(beta);
  const double phi = 1.0 + phi_minus_1;
  const double log_phi = softplus(beta);
  const double log_omega = -softplus(-gamma);
  const double log_not_omega = -softplus(gamma);
  const double omega = logistic(gamma);

  if (k == 0) {
    const double a = log_omega;
    const double b = log_not_omega - mu / phi;
    const double hi = std::max(a, b);
    t.ll = hi + std::log1p(std::exp(std::min(a, b) - hi));
    const double ra = std::exp(a - t.ll);
    const double rb = std::exp(b - t.ll);
    t.d_gamma = ra * (1.0 - omega) - rb * omega;
    t.d_eta = -rb * mu / phi;
    t.d_beta = rb * mu * phi_minus_1 / (phi * phi);
    return t;
  }
  const double kk = static_cast<double>(k);
  const double shifted = mu + phi_minus_1 * kk;
  t.ll = log_not_omega + eta + (kk - 1.0) * std::log(shifted) - std::lgamma(kk + 1.0) - kk * log_phi -
         shifted / phi;
  t.d_gamma = -omega;
  t.d_eta = 1.0 + (kk - 1.0) * mu / shifted - mu / phi;
  const double d_phi = (kk - 1.0) * kk / shifted - 2.0 * kk / phi + shifted / (phi * phi);
  t.d_beta = phi_minus_1 * d_phi;
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_observations(std::span<const FitObservation> obs, std::size_t n_alpha) {
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto& o = obs[i];
    if (o.covariates.size() != n_alpha) {
      throw DomainError(fmt::format("observation {} has {} covariates, expected {}", i, o.covariates.size(),
                                    n_alpha));
    }
    if (!(o.weight > 0.0) || !std::isfinite(o.weight)) {
      throw DomainError(fmt::format("observation {} has non-positive weight {}", i, o.weight));
    }
    if (o.response_goals < 0) {
      throw DomainError(fmt::format("observation {} has negative response {}", i, o.response_goals));
    }
  }
}

// Centred and scaled copy of the design. Column 0 is the intercept; constant
// columns beyond it are dropped (coefficient pinned to zero).
struct StandardizedDesign {
  std::size_t n_alpha = 0;
  std::vector<std::size_t> free_columns;  // raw indices of the kept non-intercept columns
  std::vector<double> centre;             // per raw column
  std::vector<double> scale;              // per raw column (0 = dropped)
  std::vector<double> z;                  // n x width, row-major
  std::vector<int> response;
  std::vector<double> weight;             // normalized to mean... sum 1
  std::size_t width = 0;                  // 1 + free_columns.size()
  double total_weight = 0.0;
  std::vector<std::string> warnings;

  explicit StandardizedDesign(std::span<const FitObservation> obs) {
    n_alpha = obs.front().covariates.size();
    centre.assign(n_alpha, 0.0);
    scale.assign(n_alpha, 0.0);
    for (const auto& o : obs) {
      if (o.covariates[0] != 1.0) throw DomainError("first covariate must be the intercept column (all ones)");
      total_weight += o.weight;
    }
    const double n = static_cast<double>(obs.size());
    for (std::size_t c = 1; c < n_alpha; ++c) {
      double m = 0.0;
      for (const auto& o : obs) m += o.covariates[c];
      m /= n;
      double v = 0.0;
      for (const auto& o : obs) v += (o.covariates[c] - m) * (o.covariates[c] - m);
      const double sd = std::sqrt(v / n);
      centre[c] = m;
      if (sd <= 1e-12 * std::max(1.0, std::abs(m))) {
        warnings.push_back(fmt::format("design matrix: covariate column {} is constant ({}); coefficient fixed at 0",
                                       c, m));
        continue;
      }
      scale[c] = sd;
      free_columns.push_back(c);
    }
    width = 1 + free_columns.size();
    z.reserve(obs.size() * width);
    for (const auto& o : obs) {
      z.push_back(1.0);
      for (std::size_t c : free_columns) z.push_back((o.covariates[c] - centre[c]) / scale[c]);
      response.push_back(o.response_goals);
      weight.push_back(o.weight / total_weight);
    }
  }

  std::size_t rows() const { return response.size(); }
  std::size_t dim() const { return width + 2; }

  RegressionCoefficients to_raw(std::span<const double> theta) const {
    RegressionCoefficients coef;
    coef.alpha.assign(n_alpha, 0.0);
    double intercept = theta[0];
    for (std::size_t j = 0; j < free_columns.size(); ++j) {
      const std::size_t c = free_columns[j];
      coef.alpha[c] = theta[1 + j] / scale[c];
      intercept -= coef.alpha[c] * centre[c];
    }
    coef.alpha[0] = intercept;
    coef.beta = theta[width];
    coef.gamma_log = theta[width + 1];
    return coef;
  }

  std::vector<double> from_raw(const RegressionCoefficients& coef) const {
    std::vector<double> theta(dim(), 0.0);
    double intercept = coef.alpha[0];
    for (std::size_t c = 1; c < n_alpha; ++c) intercept += coef.alpha[c] * centre[c];
    theta[0] = intercept;
    for (std::size_t j = 0; j < free_columns.size(); ++j) {
      const std::size_t c = free_columns[j];
      theta[1 + j] = coef.alpha[c] * scale[c];
    }
    theta[width] = coef.beta;
    theta[width + 1] = coef.gamma_log;
    return theta;
  }

  // Mean log-likelihood per unit weight; gradient in standardized coordinates.
  double objective(std::span<const double> theta, std::span<double> grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    double total = 0.0;
    const double beta = theta[width];
    const double gamma = theta[width + 1];
    for (std::size_t i = 0; i < rows(); ++i) {
      const std::span<const double> row(z.data() + i * width, width);
      const double eta = dot(row, theta.first(width));
      if (eta > 30.0) return -std::numeric_limits<double>::infinity();
      const auto t = observation_terms(response[i], eta, beta, gamma);
      const double w = weight[i];
      total += w * t.ll;
      for (std::size_t j = 0; j < width; ++j) grad[j] += w * t.d_eta * row[j];
      grad[width] += w * t.d_beta;
      grad[width + 1] += w * t.d_gamma;
    }
    return total;
  }

  // Log-link least squares on log(x + 0.5).
  std::vector<double> warm_start() const {
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(width));
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows(); ++i) {
      const double y = std::log(response[i] + 0.5);
      for (std::size_t a = 0; a < width; ++a) {
        const double za = z[i * width + a] * weight[i];
        xty[static_cast<Eigen::Index>(a)] += za * y;
        for (std::size_t b = 0; b < width; ++b) {
          xtx(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += za * z[i * width + b];
        }
      }
    }
    xtx.diagonal().array() += 1e-8;
    const Eigen::VectorXd sol = xtx.ldlt().solve(xty);
    std::vector<double> theta(dim(), 0.0);
    for (std::size_t j = 0; j < width; ++j) theta[j] = sol[static_cast<Eigen::Index>(j)];
    // log(x + 0.5) underestimates log E[x] for small counts.
    theta[0] += 0.2;
    theta[width] = -1.5;
    theta[width + 1] = -2.5;
    return theta;
  }
};

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double opponent_elo(const MatchRecord& m, const TeamId& team) {
  auto elo = m.elo_before(m.opponent_of(team));
  if (!elo) {
    throw ConfigError(fmt::format("match {} {} v {} carries no Elo-before annotation; run the Elo replay first",
                                  m.date.iso(), m.team_a, m.team_b));
  }
  return *elo;
}

}  // namespace

double RegressionCoefficients::phi() const { return 1.0 + std::exp(beta); }

double RegressionCoefficients::omega() const { return logistic(gamma_log); }

double RegressionCoefficients::mu(std::span<const double> covariates) const {
  if (covariates.size() != alpha.size()) {
    throw DomainError(fmt::format("regression expects {} covariates, got {}", alpha.size(), covariates.size()));
  }
  return std::exp(dot(alpha, covariates));
}

ZigpParams RegressionCoefficients::params(std::span<const double> covariates) const {
  ZigpParams p{mu(covariates), phi(), omega()};
  p.validate();
  return p;
}

std::string to_string(RegressionKind kind) {
  switch (kind) {
    case RegressionKind::Attack: return "attack";
    case RegressionKind::Defense: return "defense";
    case RegressionKind::Nested: return "nested";
  }
  return "unknown";
}

RegressionKind regression_kind_from_string(const std::string& text) {
  if (text == "attack") return RegressionKind::Attack;
  if (text == "defense") return RegressionKind::Defense;
  if (text == "nested") return RegressionKind::Nested;
  throw ConfigError(fmt::format("unknown regression kind '{}' (attack, defense, nested)", text));
}

const RegressionFit& TeamModel::fit(RegressionKind kind) const {
  switch (kind) {
    case RegressionKind::Attack: return attack;
    case RegressionKind::Defense: return defense;
    case RegressionKind::Nested: return nested;
  }
  return attack;
}

std::vector<FitObservation> build_attack_observations(const TeamId& team, std::span<const MatchRecord> matches,
                                                      const WeightConfig& cfg) {
  std::vector<FitObservation> out;
  for (const auto& m : matches) {
    if (!m.involves(team)) continue;
    out.push_back({m.goals_for(team), {1.0, opponent_elo(m, team), static_cast<double>(m.location_for(team))},
                   match_weight(m, cfg)});
  }
  if (out.empty()) throw InsufficientDataError(fmt::format("team '{}' has no matches in the data window", team));
  return out;
}

std::vector<FitObservation> build_defense_observations(const TeamId& team, std::span<const MatchRecord> matches,
                                                       const WeightConfig& cfg) {
  std::vector<FitObservation> out;
  for (const auto& m : matches) {
    if (!m.involves(team)) continue;
    out.push_back({m.goals_against(team), {1.0, opponent_elo(m, team), static_cast<double>(m.location_for(team))},
                   match_weight(m, cfg)});
  }
  if (out.empty()) throw InsufficientDataError(fmt::format("team '{}' has no matches in the data window", team));
  return out;
}

std::vector<FitObservation> build_nested_observations(const TeamId& team, std::span<const MatchRecord> matches,
                                                      const WeightConfig& cfg) {
  std::vector<FitObservation> out;
  for (const auto& m : matches) {
    if (!m.involves(team)) continue;
    const double own = m.elo_before(team).value_or(std::numeric_limits<double>::quiet_NaN());
    const double opp = opponent_elo(m, team);
    if (!(own < opp)) continue;
    out.push_back({m.goals_for(team),
                   {1.0, opp, static_cast<double>(m.location_for(team)), static_cast<double>(m.goals_against(team))},
                   match_weight(m, cfg)});
  }
  return out;
}

double weighted_log_likelihood(std::span<const FitObservation> obs, const RegressionCoefficients& coef) {
  check_observations(obs, coef.alpha.size());
  double total = 0.0;
  for (const auto& o : obs) {
    total += o.weight * observation_terms(o.response_goals, dot(coef.alpha, o.covariates), coef.beta,
                                          coef.gamma_log).ll;
  }
  return total;
}

std::vector<double> weighted_log_likelihood_gradient(std::span<const FitObservation> obs,
                                                     const RegressionCoefficients& coef) {
  check_observations(obs, coef.alpha.size());
  const std::size_t p = coef.alpha.size();
  std::vector<double> grad(p + 2, 0.0);
  for (const auto& o : obs) {
    const auto t = observation_terms(o.response_goals, dot(coef.alpha, o.covariates), coef.beta, coef.gamma_log);
    for (std::size_t j = 0; j < p; ++j) grad[j] += o.weight * t.d_eta * o.covariates[j];
    grad[p] += o.weight * t.d_beta;
    grad[p + 1] += o.weight * t.d_gamma;
  }
  return grad;
}

RegressionFit fit_zigp(std::span<const FitObservation> obs, const FitOptions& options) {
  if (obs.empty()) throw InsufficientDataError("no observations to fit");
  const std::size_t n_alpha = obs.front().covariates.size();
  if (n_alpha == 0) throw DomainError("observations carry no covariates");
  check_observations(obs, n_alpha);
  const int needed = minimum_observations(n_alpha);
  if (static_cast<int>(obs.size()) < needed) {
    throw InsufficientDataError(
        fmt::format("{} observations, at least {} needed for {} coefficients", obs.size(), needed, n_alpha));
  }
  if (options.init && options.init->alpha.size() != n_alpha) {
    throw DomainError("initial coefficients do not match the covariate dimension");
  }

  const StandardizedDesign design(obs);
  const auto objective = [&design](std::span<const double> theta, std::span<double> grad) {
    return design.objective(theta, grad);
  };

  RandomStream rng(options.seed);
  std::normal_distribution<double> gauss;
  const std::vector<double> warm = design.warm_start();
  const int starts = std::max(1, options.starts);

  optim::MaximizeOptions opt;
  opt.max_iterations = options.max_iterations;
  // The objective is normalized by the total weight; the stationarity
  // requirement on the raw weighted likelihood is checked afterwards.
  opt.gradient_tolerance = 1e-11;

  std::optional<RegressionFit> best;
  std::optional<RegressionFit> best_any;
  std::vector<double> best_trace;
  int converged_starts = 0;
  int total_iterations = 0;

  for (int s = 0; s < starts; ++s) {
    std::vector<double> theta0;
    if (s == 0) {
      theta0 = options.init ? design.from_raw(*options.init) : warm;
    } else {
      theta0 = warm;
      for (std::size_t j = 0; j < design.width; ++j) theta0[j] += 0.2 * gauss(rng);
      theta0[design.width] += gauss(rng);
      theta0[design.width + 1] += 1.5 * gauss(rng);
    }
    auto run = optim::maximize(objective, theta0, opt);
    total_iterations += run.iterations;
    if (!std::isfinite(run.value)) continue;

    RegressionFit fit;
    fit.coefficients = design.to_raw(run.x);
    fit.log_likelihood = weighted_log_likelihood(obs, fit.coefficients);
    fit.gradient_norm = inf_norm(weighted_log_likelihood_gradient(obs, fit.coefficients));
    fit.converged = fit.gradient_norm < options.gradient_tolerance;
    fit.n_observations = static_cast<int>(obs.size());
    fit.warnings = design.warnings;
    if (fit.converged) ++converged_starts;

    if (!best_any || fit.log_likelihood > best_any->log_likelihood) best_any = fit;
    if (fit.converged && (!best || fit.log_likelihood > best->log_likelihood)) {
      best = fit;
      best_trace = run.trace;
    }
  }

  if (!best) {
    if (best_any) {
      best_any->starts_converged = 0;
      best_any->iterations = total_iterations;
    }
    throw FitError(fmt::format("ZIGP fit did not reach a stationary point after {} starts (best gradient norm {})",
                               starts, best_any ? best_any->gradient_norm : std::numeric_limits<double>::infinity()),
                   best_any);
  }
  best->starts_converged = converged_starts;
  best->iterations = total_iterations;
  if (options.trace) {
    // Report the trace in unnormalized units.
    options.trace->clear();
    for (double v : best_trace) options.trace->push_back(v * design.total_weight);
  }
  return *best;
}

GofResult chi_square_gof(std::span<const FitObservation> obs, const RegressionCoefficients& coef) {
  check_observations(obs, coef.alpha.size());
  GofResult r;
  r.n = static_cast<int>(obs.size());
  const double not_omega = 1.0 - coef.omega();
  for (const auto& o : obs) {
    double m = not_omega * coef.mu(o.covariates);
    if (m <= 1e-8) {
      m = 1e-8;
      ++r.floored;
    }
    const double diff = o.response_goals - m;
    r.statistic += diff * diff / m;
  }
  r.df = std::max(1, r.n - static_cast<int>(coef.alpha.size()));
  r.p_value = boost::math::gamma_q(0.5 * r.df, 0.5 * r.statistic);
  return r;
}

GofResult chi_square_gof(const TeamId& team, RegressionKind kind, std::span<const MatchRecord> matches,
                         const TeamModel& model, const WeightConfig& cfg) {
  std::vector<FitObservation> obs;
  switch (kind) {
    case RegressionKind::Attack: obs = build_attack_observations(team, matches, cfg); break;
    case RegressionKind::Defense: obs = build_defense_observations(team, matches, cfg); break;
    case RegressionKind::Nested: obs = build_nested_observations(team, matches, cfg); break;
  }
  if (obs.empty()) throw InsufficientDataError(fmt::format("team '{}' has no {} observations", team, to_string(kind)));
  return chi_square_gof(obs, model.fit(kind).coefficients);
}

namespace {

FitOptions team_options(const FitOptions& base, const TeamId& team, RegressionKind kind) {
  FitOptions o = base;
  o.seed = splitmix64(base.seed ^ fnv1a(team) ^ (static_cast<std::uint64_t>(kind) + 1) * 0x9E3779B97F4A7C15ULL);
  o.trace = nullptr;
  o.init.reset();
  return o;
}

RegressionFit nested_fallback(const RegressionFit& attack) {
  RegressionFit fb = attack;
  fb.coefficients.alpha.push_back(0.0);
  fb.fallback = true;
  fb.gof.reset();
  return fb;
}

struct TeamOutcome {
  std::optional<TeamModel> model;
  std::vector<FitFailure> failures;
};

TeamOutcome fit_one_team(std::span<const MatchRecord> matches, const TeamId& team, const WeightConfig& cfg,
                         const FitOptions& options) {
  TeamOutcome out;
  TeamModel model;
  model.team = team;
  try {
    const auto attack_obs = build_attack_observations(team, matches, cfg);
    model.attack = fit_zigp(attack_obs, team_options(options, team, RegressionKind::Attack));
    model.attack.gof = chi_square_gof(attack_obs, model.attack.coefficients);
  } catch (const FitError& e) {
    out.failures.push_back({team, RegressionKind::Attack, e.what()});
    return out;
  }
  try {
    const auto defense_obs = build_defense_observations(team, matches, cfg);
    model.defense = fit_zigp(defense_obs, team_options(options, team, RegressionKind::Defense));
    model.defense.gof = chi_square_gof(defense_obs, model.defense.coefficients);
  } catch (const FitError& e) {
    out.failures.push_back({team, RegressionKind::Defense, e.what()});
    return out;
  }

  const auto nested_obs = build_nested_observations(team, matches, cfg);
  if (static_cast<int>(nested_obs.size()) < minimum_observations(4)) {
    model.nested = nested_fallback(model.attack);
    model.nested.n_observations = static_cast<int>(nested_obs.size());
    model.nested.warnings.push_back(fmt::format(
        "{} underdog matches (< {}); nested model falls back to the attack model", nested_obs.size(),
        minimum_observations(4)));
  } else {
    try {
      model.nested = fit_zigp(nested_obs, team_options(options, team, RegressionKind::Nested));
    } catch (const FitError& e) {
      out.failures.push_back({team, RegressionKind::Nested, std::string(e.what()) + " (fallback used)"});
      model.nested = nested_fallback(model.attack);
      model.nested.warnings.push_back("nested fit failed; falls back to the attack model");
    }
    model.nested.n_observations = static_cast<int>(nested_obs.size());
  }
  if (!nested_obs.empty()) model.nested.gof = chi_square_gof(nested_obs, model.nested.coefficients);
  out.model = std::move(model);
  return out;
}

}  // namespace

TeamFitSummary fit_team_models(std::span<const MatchRecord> matches, std::span<const TeamId> teams,
                               const WeightConfig& cfg, const FitOptions& options, int workers) {
  cfg.validate();
  std::vector<TeamOutcome> outcomes(teams.size());
  std::vector<std::exception_ptr> errors(teams.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < teams.size(); i = next++) {
      try {
        outcomes[i] = fit_one_team(matches, teams[i], cfg, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  // Configuration problems (unannotated matches, unknown match types) are
  // not per-team failures: surface them before fanning out.
  for (const auto& m : matches) {
    importance_weight(m.match_type, cfg);
  }
  const int n_workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(1, teams.size())));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TeamFitSummary summary;
  for (std::size_t i = 0; i < teams.size(); ++i) {
    if (outcomes[i].model) summary.models.emplace(teams[i], std::move(*outcomes[i].model));
    for (auto& f : outcomes[i].failures) summary.failures.push_back(std::move(f));
  }
  return summary;
}

}  // namespace zigpcast
