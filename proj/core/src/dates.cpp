#include "densitybench/dates.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace dbench {
namespace {

// Howard Hinnant's civil <-> serial conversions.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

Date::Date(int year, int month, int day) {
  if (month < 1 || month > 12 || day < 1 || day > 31)
    throw std::invalid_argument("invalid calendar date");
  days_ = days_from_civil(year, static_cast<unsigned>(month),
                          static_cast<unsigned>(day));
}

Date Date::from_iso(const std::string& s) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
    throw std::invalid_argument("unparsable date: '" + s + "'");
  return Date(y, m, d);
}

std::string Date::to_iso() const {
  int y;
  unsigned m, d;
  civil_from_days(days_, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
  return buf;
}

int Date::year() const {
  int y;
  unsigned m, d;
  civil_from_days(days_, y, m, d);
  return y;
}

int Date::month() const {
  int y;
  unsigned m, d;
  civil_from_days(days_, y, m, d);
  return static_cast<int>(m);
}

int Date::day() const {
  int y;
  unsigned m, d;
  civil_from_days(days_, y, m, d);
  return static_cast<int>(d);
}

int Date::weekday() const {
  // 1970-01-01 was a Thursday (index 3).
  std::int64_t w = (days_ + 3) % 7;
  if (w < 0) w += 7;
  return static_cast<int>(w);
}

Date Date::plus_days(int n) const { return from_serial(days_ + n); }

Date Date::from_serial(std::int64_t d) {
  Date out;
  out.days_ = d;
  return out;
}

bool is_business_day(Date d, const std::vector<Date>& holidays) {
  if (d.is_weekend()) return false;
  return std::find(holidays.begin(), holidays.end(), d) == holidays.end();
}

int business_days_between(Date from, Date to,
                          const std::vector<Date>& holidays) {
  if (to < from) return -business_days_between(to, from, holidays);
  int n = 0;
  for (Date d = from.plus_days(1); d <= to; d = d.plus_days(1))
    if (is_business_day(d, holidays)) ++n;
  return n;
}

Date third_friday(int year, int month) {
  Date first(year, month, 1);
  int wd = first.weekday();        // 0=Mon ... 4=Fri
  int offset = (4 - wd + 7) % 7;   // first Friday
  return first.plus_days(offset + 14);
}

}  // namespace dbench
