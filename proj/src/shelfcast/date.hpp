#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace shelfcast {

// Calendar day as a count of days since 1970-01-01. Arithmetic on dates is
// plain integer arithmetic; conversion to and from ISO-8601 goes through
// std::chrono's civil calendar.
struct Date {
  std::int32_t days = 0;

  friend constexpr auto operator<=>(Date, Date) = default;
  constexpr Date operator+(std::int32_t n) const { return Date{days + n}; }
  constexpr Date operator-(std::int32_t n) const { return Date{days - n}; }
  constexpr std::int32_t operator-(Date other) const { return days - other.days; }
};

Date parse_date(std::string_view iso);
std::string format_date(Date d);

// 0 = Monday ... 6 = Sunday.
int weekday(Date d);
int month_of(Date d);  // 1..12
int day_of_month(Date d);
int day_of_year(Date d);  // 1..366

// Index of the `length`-day bucket containing `d`; 7-day buckets start on
// Monday.
std::int32_t bucket_index(Date d, int length);

}  // namespace shelfcast
