// Calendar month, the time resolution of every series in this project.
#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace ra {

struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    // "YYYY-MM", strict: four digits, dash, two digits, month in 1..12.
    static YearMonth parse(std::string_view text);
    std::string str() const;

    // Advance by n months (n may be negative).
    YearMonth plus_months(int n) const;
};

// Inclusive month range, e.g. an exclusion window "2008-01..2008-12".
struct MonthRange {
    YearMonth first;
    YearMonth last;

    bool contains(const YearMonth& ym) const { return first <= ym && ym <= last; }

    // "YYYY-MM..YYYY-MM" with first <= last.
    static MonthRange parse(std::string_view text);
    std::string str() const;
};

}  // namespace ra
