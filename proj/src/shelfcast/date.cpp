#include "shelfcast/date.hpp"

#include <chrono>
#include <cstdio>

#include "shelfcast/error.hpp"

namespace shelfcast {

namespace {

std::chrono::year_month_day civil(Date d) {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{d.days}}};
}

std::int32_t floor_div(std::int32_t a, std::int32_t b) {
  std::int32_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Date parse_date(std::string_view iso) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  std::string buf(iso);
  char tail = 0;
  if (buf.size() != 10 || std::sscanf(buf.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    fail(ErrorCode::kParse, "invalid ISO date '" + buf + "'");
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) fail(ErrorCode::kParse, "invalid calendar date '" + buf + "'");
  return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
}

std::string format_date(Date d) {
  auto ymd = civil(d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int weekday(Date d) {
  // 1970-01-01 was a Thursday (index 3).
  return static_cast<int>(((d.days % 7) + 7 + 3) % 7);
}

int month_of(Date d) { return static_cast<int>(static_cast<unsigned>(civil(d).month())); }

int day_of_month(Date d) { return static_cast<int>(static_cast<unsigned>(civil(d).day())); }

int day_of_year(Date d) {
  auto ymd = civil(d);
  std::chrono::sys_days jan1{ymd.year() / std::chrono::January / 1};
  return static_cast<int>((std::chrono::sys_days{ymd} - jan1).count()) + 1;
}

std::int32_t bucket_index(Date d, int length) {
  require(length >= 1, "bucket length must be >= 1");
  // Shift so that day 0 of every 7-day bucket is a Monday.
  return floor_div(d.days + 3, length);
}

}  // namespace shelfcast
