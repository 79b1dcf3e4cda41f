#include "gasval/calendar.hpp"

#include "gasval/errors.hpp"

#include <charconv>
#include <cstdio>

namespace gasval {

bool is_leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int len[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y))
        return 29;
    return len[m - 1];
}

bool is_valid_date(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

// Howard Hinnant's civil calendar algorithms.
long to_serial(const Date& d) {
    int y = d.year;
    const int m = d.month;
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date from_serial(long serial) {
    serial += 719468;
    const long era = (serial >= 0 ? serial : serial - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(serial - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Date add_days(const Date& d, long n) { return from_serial(to_serial(d) + n); }

long days_between(const Date& a, const Date& b) { return to_serial(b) - to_serial(a); }

YearMonth month_of(const Date& d) { return YearMonth{d.year, d.month}; }

YearMonth add_months(const YearMonth& ym, int n) {
    int idx = ym.year * 12 + (ym.month - 1) + n;
    int y = idx / 12;
    int m = idx % 12;
    if (m < 0) {
        m += 12;
        y -= 1;
    }
    return YearMonth{y, m + 1};
}

double year_fraction(const Date& d) {
    const long start = to_serial(Date{d.year, 1, 1});
    const double len = is_leap_year(d.year) ? 366.0 : 365.0;
    return d.year + static_cast<double>(to_serial(d) - start) / len;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string to_string(const YearMonth& m) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
    return buf;
}

namespace {

int parse_int_field(const std::string& s, size_t pos, size_t len) {
    int v = 0;
    auto res = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    GASVAL_REQUIRE(res.ec == std::errc() && res.ptr == s.data() + pos + len, ErrorKind::parse,
                   "bad date field in '" << s << "'");
    return v;
}

} // namespace

Date parse_date(const std::string& s) {
    GASVAL_REQUIRE(s.size() == 10 && s[4] == '-' && s[7] == '-', ErrorKind::parse,
                   "expected YYYY-MM-DD, got '" << s << "'");
    Date d{parse_int_field(s, 0, 4), parse_int_field(s, 5, 2), parse_int_field(s, 8, 2)};
    GASVAL_REQUIRE(is_valid_date(d), ErrorKind::parse, "invalid calendar date '" << s << "'");
    return d;
}

YearMonth parse_year_month(const std::string& s) {
    GASVAL_REQUIRE(s.size() == 7 && s[4] == '-', ErrorKind::parse,
                   "expected YYYY-MM, got '" << s << "'");
    YearMonth m{parse_int_field(s, 0, 4), parse_int_field(s, 5, 2)};
    GASVAL_REQUIRE(m.month >= 1 && m.month <= 12, ErrorKind::parse,
                   "invalid month in '" << s << "'");
    return m;
}

SimGrid SimGrid::daily(const Date& start, const Date& end) {
    GASVAL_REQUIRE(start < end, ErrorKind::grid,
                   "grid start " << to_string(start) << " must precede end " << to_string(end));
    SimGrid g;
    const long n = days_between(start, end);
    g.dates.reserve(n + 1);
    g.t.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
        Date d = add_days(start, i);
        g.dates.push_back(d);
        g.t.push_back(year_fraction(d));
    }
    return g;
}

SimGrid SimGrid::from_dates(std::vector<Date> dates) {
    GASVAL_REQUIRE(dates.size() >= 2, ErrorKind::grid, "grid needs at least two dates");
    for (size_t i = 1; i < dates.size(); ++i)
        GASVAL_REQUIRE(dates[i - 1] < dates[i], ErrorKind::grid,
                       "grid dates not strictly increasing at " << to_string(dates[i]));
    SimGrid g;
    g.dates = std::move(dates);
    g.t.reserve(g.dates.size());
    for (const Date& d : g.dates)
        g.t.push_back(year_fraction(d));
    return g;
}

} // namespace gasval
