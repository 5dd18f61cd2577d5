#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace dbench {

// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
 public:
  Date() = default;
  Date(int year, int month, int day);

  static Date from_iso(const std::string& s);  // "YYYY-MM-DD"
  std::string to_iso() const;

  int year() const;
  int month() const;
  int day() const;

  // 0 = Monday ... 6 = Sunday
  int weekday() const;
  bool is_weekend() const { return weekday() >= 5; }

  Date plus_days(int n) const;

  std::int64_t serial() const { return days_; }
  static Date from_serial(std::int64_t d);

  auto operator<=>(const Date&) const = default;

 private:
  std::int64_t days_ = 0;
};

// Weekdays in (from, to], excluding any dates in `holidays` (sorted or not).
int business_days_between(Date from, Date to,
                          const std::vector<Date>& holidays = {});

bool is_business_day(Date d, const std::vector<Date>& holidays = {});

// Third Friday of the given month (a common futures/option expiry rule).
Date third_friday(int year, int month);

}  // namespace dbench
