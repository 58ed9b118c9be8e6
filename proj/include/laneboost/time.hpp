// time.hpp
// Millisecond UTC time model shared by every module. All timestamps are
// integer milliseconds since the Unix epoch; durations are plain int64 ms.

#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

namespace laneboost {

using DurationMs = std::int64_t;

struct TimeMs {
    std::int64_t ms{0};

    constexpr auto operator<=>(const TimeMs&) const = default;

    constexpr TimeMs operator+(DurationMs d) const { return TimeMs{ms + d}; }
    constexpr TimeMs operator-(DurationMs d) const { return TimeMs{ms - d}; }
    constexpr DurationMs operator-(TimeMs other) const { return ms - other.ms; }
};

constexpr DurationMs kSecond = 1'000;
constexpr DurationMs kMinute = 60'000;
constexpr DurationMs kHour   = 3'600'000;
constexpr DurationMs kDay    = 86'400'000;

// Days since 1970-01-01 for a proleptic Gregorian civil date.
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);           // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;          // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr TimeMs utc_ms(int year, unsigned month, unsigned day,
                        unsigned hour = 0, unsigned minute = 0, unsigned second = 0,
                        unsigned milli = 0) {
    return TimeMs{days_from_civil(year, month, day) * kDay +
                  static_cast<std::int64_t>(hour) * kHour +
                  static_cast<std::int64_t>(minute) * kMinute +
                  static_cast<std::int64_t>(second) * kSecond +
                  static_cast<std::int64_t>(milli)};
}

inline std::int64_t utc_day_index(TimeMs t) {
    if (t.ms < 0) throw std::invalid_argument("utc_day_index: negative timestamp");
    return t.ms / kDay;
}

inline int utc_hour_of_day(TimeMs t) {
    if (t.ms < 0) throw std::invalid_argument("utc_hour_of_day: negative timestamp");
    return static_cast<int>((t.ms % kDay) / kHour);
}

inline int utc_minute_of_day(TimeMs t) {
    if (t.ms < 0) throw std::invalid_argument("utc_minute_of_day: negative timestamp");
    return static_cast<int>((t.ms % kDay) / kMinute);
}

} // namespace laneboost
