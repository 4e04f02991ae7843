#include "zigpcast/zigp.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "zigpcast/errors.hpp"

namespace zigpcast {

namespace {

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// log P[X=k] for k >= 1, parameters already validated.
double log_positive_term(const ZigpParams& p, int k) {
  const double kk = static_cast<double>(k);
  const double shifted = p.mu + (p.phi - 1.0) * kk;
  return std::log1p(-p.omega) + std::log(p.mu) + (kk - 1.0) * std::log(shifted) -
         std::lgamma(kk + 1.0) - kk * std::log(p.phi) - shifted / p.phi;
}

}  // namespace

bool ZigpParams::valid() const {
  return std::isfinite(mu) && mu > 0.0 && std::isfinite(phi) && phi >= 1.0 &&
         std::isfinite(omega) && omega >= 0.0 && omega < 1.0;
}

void ZigpParams::validate() const {
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw DomainError(fmt::format("ZIGP mu must be finite and > 0 (got {})", mu));
  }
  if (!std::isfinite(phi) || phi < 1.0) {
    throw DomainError(fmt::format("ZIGP phi must be finite and >= 1 (got {})", phi));
  }
  if (!std::isfinite(omega) || omega < 0.0 || omega >= 1.0) {
    throw DomainError(fmt::format("ZIGP omega must lie in [0, 1) (got {})", omega));
  }
}

double pmf(const ZigpParams& params, int k) {
  params.validate();
  if (k < 0) throw DomainError(fmt::format("ZIGP pmf evaluated at negative count {}", k));
  if (k == 0) return params.omega + (1.0 - params.omega) * std::exp(-params.mu / params.phi);
  return std::exp(log_positive_term(params, k));
}

double log_pmf(const ZigpParams& params, int k) {
  params.validate();
  if (k < 0) throw DomainError(fmt::format("ZIGP pmf evaluated at negative count {}", k));
  if (k == 0) {
    const double log_omega =
        params.omega > 0.0 ? std::log(params.omega) : -std::numeric_limits<double>::infinity();
    return log_add_exp(log_omega, std::log1p(-params.omega) - params.mu / params.phi);
  }
  return log_positive_term(params, k);
}

std::vector<double> truncated_pmf(const ZigpParams& params, double tail, int hard_cap) {
  params.validate();
  std::vector<double> probs;
  probs.reserve(32);
  double cumulative = 0.0;
  for (int k = 0; k <= hard_cap; ++k) {
    const double p = k == 0 ? params.omega + (1.0 - params.omega) * std::exp(-params.mu / params.phi)
                            : std::exp(log_positive_term(params, k));
    probs.push_back(p);
    cumulative += p;
    if (cumulative >= 1.0 - tail) break;
  }
  for (double& p : probs) p /= cumulative;
  return probs;
}

int sample(const ZigpParams& params, RandomStream& rng) {
  params.validate();
  // Fixed buffer: the truncated support never exceeds kHardGoalCap + 1 entries.
  std::array<double, kHardGoalCap + 1> probs{};
  int last = 0;
  double cumulative = 0.0;
  for (int k = 0; k <= kHardGoalCap; ++k) {
    probs[k] = k == 0 ? params.omega + (1.0 - params.omega) * std::exp(-params.mu / params.phi)
                      : std::exp(log_positive_term(params, k));
    cumulative += probs[k];
    last = k;
    if (cumulative >= 1.0 - kTruncationTailMass) break;
  }
  const double target = rng.uniform() * cumulative;
  double running = 0.0;
  for (int k = 0; k < last; ++k) {
    running += probs[k];
    if (target < running) return k;
  }
  return last;
}

}  // namespace zigpcast
