#include "navmine/clock.hpp"

#include <array>
#include <cstdio>
#include <cstring>

namespace navmine {

namespace {

constexpr std::array<const char*, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_from_name(std::string_view name) {
  for (int i = 0; i < 12; ++i) {
    if (name == kMonthNames[i]) return i + 1;
  }
  return 0;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

// Howard Hinnant's days-from-civil algorithm; avoids timezone-dependent
// libc conversions so parsing is reproducible everywhere.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), m, d};
}

}  // namespace

CivilDate civil_from_instant(Instant t) {
  std::int64_t days = t / 86400;
  if (t % 86400 < 0) --days;
  return civil_from_days(days);
}

std::string month_key(Instant t) {
  CivilDate c = civil_from_instant(t);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", c.year, c.month);
  return buf;
}

std::optional<Instant> parse_clf_time(std::string_view field) {
  // dd/Mon/yyyy:HH:MM:SS zzzzz  -- fixed widths throughout.
  if (field.size() != 26) return std::nullopt;
  if (field[2] != '/' || field[6] != '/' || field[11] != ':' ||
      field[14] != ':' || field[17] != ':' || field[20] != ' ') {
    return std::nullopt;
  }
  const std::string_view dd = field.substr(0, 2);
  const std::string_view mon = field.substr(3, 3);
  const std::string_view yyyy = field.substr(7, 4);
  const std::string_view hh = field.substr(12, 2);
  const std::string_view mi = field.substr(15, 2);
  const std::string_view ss = field.substr(18, 2);
  const std::string_view zone = field.substr(21, 5);

  if (!all_digits(dd) || !all_digits(yyyy) || !all_digits(hh) ||
      !all_digits(mi) || !all_digits(ss)) {
    return std::nullopt;
  }
  const int month = month_from_name(mon);
  if (month == 0) return std::nullopt;
  if (zone[0] != '+' && zone[0] != '-') return std::nullopt;
  if (!all_digits(zone.substr(1))) return std::nullopt;

  const int day = to_int(dd);
  const int year = to_int(yyyy);
  const int hour = to_int(hh);
  const int minute = to_int(mi);
  const int second = to_int(ss);
  if (day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }

  const int zh = to_int(zone.substr(1, 2));
  const int zm = to_int(zone.substr(3, 2));
  std::int64_t offset = zh * 3600 + zm * 60;
  if (zone[0] == '-') offset = -offset;

  const std::int64_t days = days_from_civil(year, month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_clf_time(Instant t) {
  const CivilDate c = civil_from_instant(t);
  std::int64_t sec_of_day = t % 86400;
  if (sec_of_day < 0) sec_of_day += 86400;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02u/%s/%04d:%02lld:%02lld:%02lld +0000",
                c.day, kMonthNames[c.month - 1], c.year,
                static_cast<long long>(sec_of_day / 3600),
                static_cast<long long>((sec_of_day / 60) % 60),
                static_cast<long long>(sec_of_day % 60));
  return buf;
}

}  // namespace navmine
