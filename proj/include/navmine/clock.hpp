#ifndef NAVMINE_CLOCK_HPP
#define NAVMINE_CLOCK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace navmine {

// Absolute instant, seconds since the Unix epoch (UTC).
using Instant = std::int64_t;

// Durations inside the toolkit are plain seconds; dwell arithmetic is
// real-valued even though log timestamps only carry whole seconds.
using Seconds = double;

struct CivilDate {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
};

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int y, unsigned m, unsigned d);

CivilDate civil_from_instant(Instant t);

// "YYYY-MM" bucket key in UTC, used by the monthly report.
std::string month_key(Instant t);

// Parses a CLF clock field, e.g. "10/Jul/2005:12:00:00 +0000".
// Returns nothing if the field does not match the grammar.
std::optional<Instant> parse_clf_time(std::string_view field);

// Formats an instant back into CLF clock syntax, always in +0000.
std::string format_clf_time(Instant t);

}  // namespace navmine

#endif  // NAVMINE_CLOCK_HPP
