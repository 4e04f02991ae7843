#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace zigpcast {

// Calendar date without time zone. Differences are whole calendar days.
class Date {
 public:
  constexpr Date() = default;
  explicit constexpr Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  // Strict YYYY-MM-DD. Throws DomainError on anything else.
  static Date parse(std::string_view iso);
  static std::optional<Date> try_parse(std::string_view iso);

  std::string iso() const;
  std::chrono::sys_days sys_days() const { return days_; }

  // Signed number of days from this date to `later`.
  long days_until(Date later) const { return (later.days_ - days_).count(); }

  Date plus_days(long n) const { return Date{days_ + std::chrono::days{n}}; }

  auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace zigpcast
