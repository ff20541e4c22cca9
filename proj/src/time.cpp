#include "irhvac/time.hpp"

#include <charconv>
#include <cstdio>

#include <fmt/format.h>

#include "irhvac/error.hpp"

namespace irhvac {

namespace {

int parse_fixed(std::string_view text, std::size_t pos, std::size_t width, std::string_view what) {
    if (pos + width > text.size())
        throw FormatError(fmt::format("timestamp '{}': truncated {}", text, what));
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + width, value);
    if (ec != std::errc{} || ptr != first + width)
        throw FormatError(fmt::format("timestamp '{}': bad {}", text, what));
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c)
        throw FormatError(fmt::format("'{}': expected '{}' at position {}", text, c, pos));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10) throw FormatError(fmt::format("date '{}': expected YYYY-MM-DD", text));
    const int y = parse_fixed(text, 0, 4, "year");
    expect_char(text, 4, '-');
    const int m = parse_fixed(text, 5, 2, "month");
    expect_char(text, 7, '-');
    const int d = parse_fixed(text, 8, 2, "day");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw FormatError(fmt::format("date '{}' is not a calendar date", text));
    return Date{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

UtcOffset parse_utc_offset(std::string_view text) {
    if (text == "Z" || text == "z") return {};
    if (text.size() != 6 || (text[0] != '+' && text[0] != '-'))
        throw FormatError(fmt::format("utc offset '{}': expected +hh:mm or Z", text));
    const int h = parse_fixed(text, 1, 2, "offset hours");
    expect_char(text, 3, ':');
    const int m = parse_fixed(text, 4, 2, "offset minutes");
    if (h > 23 || m > 59) throw FormatError(fmt::format("utc offset '{}' out of range", text));
    const int s = (h * 3600 + m * 60) * (text[0] == '-' ? -1 : 1);
    return {s};
}

std::string format_utc_offset(UtcOffset offset) {
    const int a = offset.seconds < 0 ? -offset.seconds : offset.seconds;
    return fmt::format("{}{:02d}:{:02d}", offset.seconds < 0 ? '-' : '+', a / 3600, (a % 3600) / 60);
}

std::int64_t parse_time_of_day(std::string_view text) {
    if (text.size() != 5 && text.size() != 8)
        throw FormatError(fmt::format("time of day '{}': expected hh:mm[:ss]", text));
    const int h = parse_fixed(text, 0, 2, "hour");
    expect_char(text, 2, ':');
    const int m = parse_fixed(text, 3, 2, "minute");
    int s = 0;
    if (text.size() == 8) {
        expect_char(text, 5, ':');
        s = parse_fixed(text, 6, 2, "second");
    }
    if (h > 24 || m > 59 || s > 59 || (h == 24 && (m != 0 || s != 0)))
        throw FormatError(fmt::format("time of day '{}' out of range", text));
    return h * 3600 + m * 60 + s;
}

std::string format_time_of_day(std::int64_t seconds) {
    const std::int64_t h = seconds / 3600, m = (seconds % 3600) / 60, s = seconds % 60;
    if (s == 0) return fmt::format("{:02d}:{:02d}", h, m);
    return fmt::format("{:02d}:{:02d}:{:02d}", h, m, s);
}

Instant parse_instant(std::string_view text) {
    if (text.size() < 20) throw FormatError(fmt::format("timestamp '{}': too short", text));
    const Date d = parse_date(text.substr(0, 10));
    if (text[10] != 'T' && text[10] != ' ')
        throw FormatError(fmt::format("timestamp '{}': expected 'T' separator", text));
    const std::int64_t tod = parse_time_of_day(text.substr(11, 8));
    const UtcOffset off = parse_utc_offset(text.substr(19));
    return local_midnight(d, off) + tod;
}

std::string format_instant(Instant t, UtcOffset offset) {
    return fmt::format("{}T{:02d}:{:02d}:{:02d}{}", format_date(local_date(t, offset)),
                       local_seconds_of_day(t, offset) / 3600, (local_seconds_of_day(t, offset) % 3600) / 60,
                       local_seconds_of_day(t, offset) % 60, format_utc_offset(offset));
}

Date local_date(Instant t, UtcOffset offset) {
    return Date{std::chrono::days{floor_div(t.seconds + offset.seconds, seconds_per_day)}};
}

std::int64_t local_seconds_of_day(Instant t, UtcOffset offset) {
    const std::int64_t local = t.seconds + offset.seconds;
    return local - floor_div(local, seconds_per_day) * seconds_per_day;
}

Instant local_midnight(Date d, UtcOffset offset) {
    return Instant{d.time_since_epoch().count() * seconds_per_day - offset.seconds};
}

int weekday_index(Date d) {
    return static_cast<int>(std::chrono::weekday{d}.iso_encoding()) - 1;
}

}  // namespace irhvac
