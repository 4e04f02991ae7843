#pragma once

#include <vector>

#include "zigpcast/random.hpp"

namespace zigpcast {

// Zero-inflated generalized Poisson distribution.
//
//   P[X=0] = omega + (1-omega) exp(-mu/phi)
//   P[X=k] = (1-omega) mu (mu+(phi-1)k)^(k-1) / k! * phi^-k * exp(-(mu+(phi-1)k)/phi)
//
// with mu > 0, phi >= 1, 0 <= omega < 1. phi = 1, omega = 0 is Poisson(mu).
struct ZigpParams {
  double mu = 1.0;
  double phi = 1.0;
  double omega = 0.0;

  bool valid() const;
  // Throws DomainError naming the offending parameter.
  void validate() const;

  double mean() const { return (1.0 - omega) * mu; }
  double variance() const { return (1.0 - omega) * mu * (phi * phi + omega * mu); }
};

inline constexpr int kHardGoalCap = 200;
inline constexpr double kTruncationTailMass = 1e-9;

double pmf(const ZigpParams& params, int k);
double log_pmf(const ZigpParams& params, int k);

inline double mean(const ZigpParams& params) { return params.mean(); }
inline double variance(const ZigpParams& params) { return params.variance(); }

// pmf over 0..K where K is the smallest count with cumulative mass >= 1 - tail
// (or hard_cap), renormalized to sum to one.
std::vector<double> truncated_pmf(const ZigpParams& params,
                                  double tail = kTruncationTailMass,
                                  int hard_cap = kHardGoalCap);

// Inversion sampling over the truncated, renormalized pmf.
int sample(const ZigpParams& params, RandomStream& rng);

}  // namespace zigpcast
