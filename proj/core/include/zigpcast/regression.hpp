#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zigpcast/errors.hpp"
#include "zigpcast/match_record.hpp"
#include "zigpcast/match_weights.hpp"
#include "zigpcast/zigp.hpp"

namespace zigpcast {

// ZIGP regression coefficients:
//   log mu = alpha . covariates   (intercept first)
//   phi    = 1 + exp(beta)
//   omega  = exp(gamma_log) / (1 + exp(gamma_log))
struct RegressionCoefficients {
  std::vector<double> alpha;
  double beta = 0.0;
  double gamma_log = 0.0;

  double phi() const;
  double omega() const;
  double mu(std::span<const double> covariates) const;
  ZigpParams params(std::span<const double> covariates) const;

  friend bool operator==(const RegressionCoefficients&, const RegressionCoefficients&) = default;
};

enum class RegressionKind { Attack, Defense, Nested };

std::string to_string(RegressionKind kind);
RegressionKind regression_kind_from_string(const std::string& text);

struct FitObservation {
  int response_goals = 0;
  std::vector<double> covariates;
  double weight = 1.0;
};

struct GofResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  int n = 0;
  int floored = 0;  // fitted means raised to the 1e-8 floor

  friend bool operator==(const GofResult&, const GofResult&) = default;
};

struct RegressionFit {
  RegressionCoefficients coefficients;
  double log_likelihood = 0.0;  // weighted, at the optimum
  double gradient_norm = 0.0;   // infinity norm of the weighted log-likelihood gradient
  int iterations = 0;
  int starts_converged = 0;
  bool converged = false;
  // Nested model replaced by the attack model with the opponent-goals term fixed at 0.
  bool fallback = false;
  int n_observations = 0;
  std::optional<GofResult> gof;
  std::vector<std::string> warnings;

  friend bool operator==(const RegressionFit&, const RegressionFit&) = default;
};

struct TeamModel {
  TeamId team;
  RegressionFit attack;
  RegressionFit defense;
  RegressionFit nested;

  const RegressionFit& fit(RegressionKind kind) const;

  friend bool operator==(const TeamModel&, const TeamModel&) = default;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, std::optional<RegressionFit> best = std::nullopt)
      : Error(what), best_(std::move(best)) {}
  const std::optional<RegressionFit>& best_so_far() const { return best_; }

 private:
  std::optional<RegressionFit> best_;
};

class InsufficientDataError : public FitError {
 public:
  using FitError::FitError;
};

// Minimum sample for a regression with `n_alpha` linear coefficients.
inline int minimum_observations(std::size_t n_alpha) {
  return std::max(10, 2 * static_cast<int>(n_alpha));
}

// Response = team's goals; covariates (1, opponent Elo before, loc).
std::vector<FitObservation> build_attack_observations(const TeamId& team, std::span<const MatchRecord> matches,
                                                      const WeightConfig& cfg);
// Response = goals conceded; covariates (1, opponent Elo before, loc).
std::vector<FitObservation> build_defense_observations(const TeamId& team, std::span<const MatchRecord> matches,
                                                       const WeightConfig& cfg);
// Underdog matches only (strictly lower Elo before); covariates
// (1, opponent Elo before, loc, opponent goals).
std::vector<FitObservation> build_nested_observations(const TeamId& team, std::span<const MatchRecord> matches,
                                                      const WeightConfig& cfg);

// Weighted log-likelihood sum_i w_i log pmf(x_i) and its gradient in the
// order (alpha..., beta, gamma_log).
double weighted_log_likelihood(std::span<const FitObservation> obs, const RegressionCoefficients& coef);
std::vector<double> weighted_log_likelihood_gradient(std::span<const FitObservation> obs,
                                                     const RegressionCoefficients& coef);

struct FitOptions {
  int starts = 5;
  std::uint64_t seed = 0;
  int max_iterations = 500;
  double gradient_tolerance = 1e-5;
  std::optional<RegressionCoefficients> init;
  // Filled with the objective trace of the winning start when non-null.
  std::vector<double>* trace = nullptr;
};

// Weighted maximum likelihood over (alpha, beta, gamma_log). Throws
// InsufficientDataError for samples below minimum_observations() and
// FitError when no start reaches a stationary point.
RegressionFit fit_zigp(std::span<const FitObservation> obs, const FitOptions& options = {});

// Pearson statistic sum (x_i - m_i)^2 / m_i with m_i the ZIGP mean
// (1 - omega) mu_i; df = max(1, n - #alpha); p-value from the chi-square tail.
GofResult chi_square_gof(std::span<const FitObservation> obs, const RegressionCoefficients& coef);
GofResult chi_square_gof(const TeamId& team, RegressionKind kind, std::span<const MatchRecord> matches,
                         const TeamModel& model, const WeightConfig& cfg);

struct FitFailure {
  TeamId team;
  RegressionKind kind;
  std::string message;
};

struct TeamFitSummary {
  std::map<TeamId, TeamModel> models;
  std::vector<FitFailure> failures;
};

// Attack and defense fits on all of each team's matches, nested fit on its
// underdog matches, diagnostics attached. Failures are collected per team.
TeamFitSummary fit_team_models(std::span<const MatchRecord> matches, std::span<const TeamId> teams,
                               const WeightConfig& cfg, const FitOptions& options = {}, int workers = 1);

}  // namespace zigpcast
