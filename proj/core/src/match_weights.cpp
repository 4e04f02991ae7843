#include "zigpcast/match_weights.hpp"

#include <cmath>

#include <fmt/format.h>

#include "zigpcast/errors.hpp"

namespace zigpcast {

std::map<std::string, double> WeightConfig::default_importance() {
  return {{"WC", 4.0}, {"CONT", 3.0}, {"QUAL", 2.5}, {"NL", 2.5}, {"FRIENDLY", 1.0}, {"OTHER", 1.0}};
}

WeightConfig WeightConfig::defaults(Date reference_date) {
  WeightConfig cfg;
  cfg.reference_date = reference_date;
  cfg.importance = default_importance();
  return cfg;
}

void WeightConfig::validate() const {
  if (half_period_days <= 0) {
    throw ConfigError(fmt::format("half_period_days must be positive (got {})", half_period_days));
  }
  for (const auto& [code, w] : importance) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ConfigError(fmt::format("importance weight for '{}' must be positive (got {})", code, w));
    }
  }
}

double date_weight(Date match_date, const WeightConfig& cfg) {
  const long days = match_date.days_until(cfg.reference_date);
  if (days < 0) {
    throw DomainError(fmt::format("match dated {} lies after the reference date {}", match_date.iso(),
                                  cfg.reference_date.iso()));
  }
  if (cfg.half_period_days <= 0) {
    throw ConfigError(fmt::format("half_period_days must be positive (got {})", cfg.half_period_days));
  }
  return std::exp2(-static_cast<double>(days) / cfg.half_period_days);
}

double importance_weight(const std::string& match_type, const WeightConfig& cfg) {
  auto it = cfg.importance.find(match_type);
  if (it == cfg.importance.end()) {
    std::string known;
    for (const auto& [code, _] : cfg.importance) known += (known.empty() ? "" : ", ") + code;
    throw ConfigError(fmt::format("unknown match type '{}' (valid codes: {})", match_type, known));
  }
  return it->second;
}

double match_weight(const MatchRecord& match, const WeightConfig& cfg) {
  return date_weight(match.date, cfg) * importance_weight(match.match_type, cfg);
}

}  // namespace zigpcast
