#pragma once

#include <compare>
#include <string>
#include <vector>

namespace gasval {

/// Proleptic Gregorian calendar date.
struct Date {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31

    auto operator<=>(const Date&) const = default;
};

/// Delivery month of a futures contract.
struct YearMonth {
    int year = 1970;
    int month = 1;

    auto operator<=>(const YearMonth&) const = default;
    Date first_day() const { return Date{year, month, 1}; }
};

bool is_leap_year(int y);
int days_in_month(int y, int m);
bool is_valid_date(const Date& d);

// Days since 1970-01-01; negative before the epoch.
long to_serial(const Date& d);
Date from_serial(long serial);

Date add_days(const Date& d, long n);
long days_between(const Date& a, const Date& b); // b - a in days

YearMonth month_of(const Date& d);
YearMonth add_months(const YearMonth& ym, int n);

// Year fraction with integer values at each January 1st, so seasonal terms
// anchored at calendar dates stay aligned across leap years.
double year_fraction(const Date& d);

std::string to_string(const Date& d);      // YYYY-MM-DD
std::string to_string(const YearMonth& m); // YYYY-MM
Date parse_date(const std::string& s);
YearMonth parse_year_month(const std::string& s);

/// Time grid of a simulation or contract: n+1 dates, t[i] = year_fraction(dates[i]).
struct SimGrid {
    std::vector<Date> dates;
    std::vector<double> t;

    int n_steps() const { return static_cast<int>(dates.size()) - 1; }

    static SimGrid daily(const Date& start, const Date& end);
    static SimGrid from_dates(std::vector<Date> dates);
};

} // namespace gasval
