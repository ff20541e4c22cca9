#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace irhvac {

inline constexpr std::int64_t seconds_per_day = 86400;

/// Absolute instant, whole seconds since the Unix epoch (UTC).
struct Instant {
    std::int64_t seconds = 0;

    friend constexpr auto operator<=>(Instant, Instant) = default;
    friend constexpr Instant operator+(Instant t, std::int64_t s) { return {t.seconds + s}; }
    friend constexpr Instant operator-(Instant t, std::int64_t s) { return {t.seconds - s}; }
    friend constexpr std::int64_t operator-(Instant a, Instant b) { return a.seconds - b.seconds; }
};

/// Fixed offset of local civil time from UTC. No DST.
struct UtcOffset {
    std::int32_t seconds = 0;
    friend constexpr bool operator==(UtcOffset, UtcOffset) = default;
};

using Date = std::chrono::sys_days;

// ISO-8601 "YYYY-MM-DDThh:mm:ss" followed by "Z" or "+hh:mm"/"-hh:mm".
// Throws FormatError.
Instant parse_instant(std::string_view text);
std::string format_instant(Instant t, UtcOffset offset);

UtcOffset parse_utc_offset(std::string_view text);
std::string format_utc_offset(UtcOffset offset);

/// "hh:mm" or "hh:mm:ss" -> seconds after local midnight.
std::int64_t parse_time_of_day(std::string_view text);
std::string format_time_of_day(std::int64_t seconds);

Date parse_date(std::string_view text);
std::string format_date(Date d);

Date local_date(Instant t, UtcOffset offset);
std::int64_t local_seconds_of_day(Instant t, UtcOffset offset);
Instant local_midnight(Date d, UtcOffset offset);

/// 0 = Monday ... 6 = Sunday.
int weekday_index(Date d);

}  // namespace irhvac
