#include "ra/yearmonth.hpp"

#include <cctype>
#include <cstdio>

#include "ra/errors.hpp"

namespace ra {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

}  // namespace

YearMonth YearMonth::parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-' || !all_digits(text.substr(0, 4)) ||
        !all_digits(text.substr(5, 2))) {
        throw ParseError("bad year-month '" + std::string(text) + "', expected YYYY-MM");
    }
    int y = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    int m = (text[5] - '0') * 10 + (text[6] - '0');
    if (m < 1 || m > 12) {
        throw ParseError("month out of range in '" + std::string(text) + "'");
    }
    return {y, m};
}

std::string YearMonth::str() const {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::plus_months(int n) const {
    int idx = year * 12 + (month - 1) + n;
    int y = idx / 12;
    int m = idx % 12;
    if (m < 0) {
        m += 12;
        --y;
    }
    return {y, m + 1};
}

MonthRange MonthRange::parse(std::string_view text) {
    auto sep = text.find("..");
    if (sep == std::string_view::npos) {
        throw ParseError("bad month range '" + std::string(text) + "', expected YYYY-MM..YYYY-MM");
    }
    MonthRange r{YearMonth::parse(text.substr(0, sep)), YearMonth::parse(text.substr(sep + 2))};
    if (r.last < r.first) {
        throw ValidationError("month range '" + std::string(text) + "' has start after end");
    }
    return r;
}

std::string MonthRange::str() const { return first.str() + ".." + last.str(); }

}  // namespace ra
