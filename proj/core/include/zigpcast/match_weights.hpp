#pragma once

#include <map>
#include <string>

#include "zigpcast/date.hpp"
#include "zigpcast/match_record.hpp"

namespace zigpcast {

struct WeightConfig {
  int half_period_days = 1095;
  Date reference_date;
  std::map<std::string, double> importance;

  // WC 4, CONT 3, QUAL 2.5, NL 2.5, FRIENDLY 1, OTHER 1.
  static std::map<std::string, double> default_importance();
  static WeightConfig defaults(Date reference_date);

  void validate() const;
};

// (1/2)^(D/H), D = calendar days from the match to the reference date.
double date_weight(Date match_date, const WeightConfig& cfg);
double importance_weight(const std::string& match_type, const WeightConfig& cfg);
double match_weight(const MatchRecord& match, const WeightConfig& cfg);

}  // namespace zigpcast
