#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace geosocial {

using Date = std::chrono::sys_days;
using EpochSeconds = std::int64_t;

namespace detail {

inline std::optional<int> parse_fixed_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int value = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

inline std::optional<unsigned> month_from_abbrev(std::string_view m) {
    static constexpr std::array<std::string_view, 12> names = {
        "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    for (unsigned i = 0; i < names.size(); ++i) {
        if (names[i] == m) return i + 1;
    }
    return std::nullopt;
}

}  // namespace detail

/// Parses the classic API timestamp "EEE MMM dd HH:mm:ss Z yyyy", e.g.
/// "Sun Oct 28 14:03:12 +0000 2012", returning UTC epoch seconds.
inline std::optional<EpochSeconds> parse_api_timestamp(std::string_view s) {
    // Fixed layout: 3+1+3+1+2+1+8+1+5+1+4 = 30 characters.
    if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[19] != ' ' || s[25] != ' ' ||
        s[13] != ':' || s[16] != ':')
        return std::nullopt;
    const auto month = detail::month_from_abbrev(s.substr(4, 3));
    const auto day = detail::parse_fixed_int(s.substr(8, 2));
    const auto hh = detail::parse_fixed_int(s.substr(11, 2));
    const auto mm = detail::parse_fixed_int(s.substr(14, 2));
    const auto ss = detail::parse_fixed_int(s.substr(17, 2));
    const char sign = s[20];
    const auto zh = detail::parse_fixed_int(s.substr(21, 2));
    const auto zm = detail::parse_fixed_int(s.substr(23, 2));
    const auto year = detail::parse_fixed_int(s.substr(26, 4));
    if (!month || !day || !hh || !mm || !ss || !zh || !zm || !year || (sign != '+' && sign != '-')) return std::nullopt;
    if (*hh > 23 || *mm > 59 || *ss > 60 || *zh > 23 || *zm > 59) return std::nullopt;

    const std::chrono::year_month_day ymd{std::chrono::year{*year}, std::chrono::month{*month},
                                          std::chrono::day{static_cast<unsigned>(*day)}};
    if (!ymd.ok()) return std::nullopt;
    const EpochSeconds days = Date{ymd}.time_since_epoch().count();
    const EpochSeconds offset = (sign == '+' ? 1 : -1) * (*zh * 3600 + *zm * 60);
    return days * 86400 + *hh * 3600 + *mm * 60 + *ss - offset;
}

/// UTC calendar day containing the given instant.
inline Date date_of(EpochSeconds t) {
    return std::chrono::floor<std::chrono::days>(std::chrono::sys_seconds{std::chrono::seconds{t}});
}

/// Formats as ISO "YYYY-MM-DD".
inline std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    const int y = static_cast<int>(ymd.year());
    const unsigned m = static_cast<unsigned>(ymd.month());
    const unsigned dd = static_cast<unsigned>(ymd.day());
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, dd);
    return buf;
}

/// Parses ISO "YYYY-MM-DD".
inline std::optional<Date> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    const auto y = detail::parse_fixed_int(s.substr(0, 4));
    const auto m = detail::parse_fixed_int(s.substr(5, 2));
    const auto d = detail::parse_fixed_int(s.substr(8, 2));
    if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

/// ISO 8601 UTC, e.g. "2012-10-28T14:05:00Z".
inline std::string format_timestamp_iso(EpochSeconds t) {
    const Date d = date_of(t);
    const EpochSeconds secs = t - d.time_since_epoch().count() * 86400;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(d).c_str(), static_cast<int>(secs / 3600),
                  static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
    return buf;
}

/// Inverse of parse_api_timestamp for UTC output (used by the synthetic generator).
inline std::string format_api_timestamp(EpochSeconds t) {
    static constexpr std::array<std::string_view, 7> weekdays = {"Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};
    static constexpr std::array<std::string_view, 12> months = {
        "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    const Date d = date_of(t);
    const std::chrono::year_month_day ymd{d};
    const std::chrono::weekday wd{d};
    const EpochSeconds secs = t - d.time_since_epoch().count() * 86400;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s %s %02u %02d:%02d:%02d +0000 %04d",
                  weekdays[wd.c_encoding()].data(), months[static_cast<unsigned>(ymd.month()) - 1].data(),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60),
                  static_cast<int>(secs % 60), static_cast<int>(ymd.year()));
    return buf;
}

}  // namespace geosocial
