#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "doq/errors.hpp"

namespace doq {

/// Calendar date (proleptic Gregorian). Only what the backtest needs:
/// ISO-8601 parsing, ordering, and weekday counting for ACT/252.
struct Date {
    int y = 1970;
    unsigned m = 1;
    unsigned d = 1;

    auto operator<=>(const Date&) const = default;

    /// Days since 1970-01-01 (Howard Hinnant's civil-days algorithm).
    long serial() const {
        const int yy = y - (m <= 2);
        const long era = (yy >= 0 ? yy : yy - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(yy - era * 400);
        const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<long>(doe) - 719468;
    }

    /// 0 = Monday ... 6 = Sunday.
    int weekday() const {
        const long s = serial();
        return static_cast<int>(((s % 7) + 10) % 7); // serial 0 was a Thursday
    }

    bool is_weekday() const { return weekday() < 5; }

    Date next_day() const {
        Date n = *this;
        static constexpr unsigned md[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        const bool leap = (n.y % 4 == 0 && n.y % 100 != 0) || n.y % 400 == 0;
        const unsigned last = (n.m == 2 && leap) ? 29 : md[n.m - 1];
        if (n.d < last) {
            ++n.d;
        } else {
            n.d = 1;
            if (n.m < 12) ++n.m; else { n.m = 1; ++n.y; }
        }
        return n;
    }

    Date next_weekday() const {
        Date n = next_day();
        while (!n.is_weekday()) n = n.next_day();
        return n;
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
        return buf;
    }
};

inline Date parse_iso_date(const std::string& s, long line_no = 0) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    const int got = std::sscanf(s.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail);
    const bool tail_ok = got == 3 || (got == 4 && (tail == ' ' || tail == '\r'));
    if (!tail_ok || m < 1 || m > 12 || d < 1 || d > 31)
        throw domain_error("malformed ISO-8601 date '" + s + "'" +
                           (line_no > 0 ? " at line " + std::to_string(line_no) : ""));
    return Date{y, m, d};
}

/// Number of weekdays in (from, to]; the ACT/252 trading-day count.
inline long trading_days_between(const Date& from, const Date& to) {
    if (to <= from)
        return 0;
    const long a = from.serial(), b = to.serial();
    long count = 0;
    // whole weeks plus remainder; serial weekday is cheap enough to just loop
    // the remainder days.
    const long weeks = (b - a) / 7;
    count = weeks * 5;
    for (long s = a + weeks * 7 + 1; s <= b; ++s) {
        const int wd = static_cast<int>(((s % 7) + 10) % 7);
        if (wd < 5) ++count;
    }
    return count;
}

} // namespace doq
