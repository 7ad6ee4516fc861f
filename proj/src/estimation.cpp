#include "ra/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ra/errors.hpp"
#include "ra/lottery.hpp"

namespace ra {

std::string EstimationScheme::str() const {
    std::ostringstream os;
    if (kind == Kind::Expanding) {
        os << "expanding:" << param;
    } else {
        os << "rolling:" << param;
    }
    return os.str();
}

namespace {

// Two-pass sample moments over returns[first..last], (n-1) denominator.
MomentEntry window_moments(std::span<const Dated> returns, std::size_t first, std::size_t last) {
    std::size_t n = last - first + 1;
    double mean = 0.0;
    for (std::size_t i = first; i <= last; ++i) mean += returns[i].value;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        double d = returns[i].value - mean;
        ss += d * d;
    }
    double var = ss / static_cast<double>(n - 1);
    return {returns[last].date, mean, std::sqrt(var)};
}

void check_dates_increasing(std::span<const Dated> returns) {
    for (std::size_t i = 1; i < returns.size(); ++i) {
        if (!(returns[i - 1].date < returns[i].date)) {
            throw ValidationError("return series dates must be strictly increasing (at " +
                                  returns[i].date.str() + ")");
        }
    }
}

}  // namespace

MomentSeries expanding_moments(std::span<const Dated> returns, int min_obs) {
    if (min_obs < 2) throw ValidationError("expanding estimation requires min_obs >= 2");
    if (returns.size() < static_cast<std::size_t>(min_obs)) {
        throw InsufficientData("need at least " + std::to_string(min_obs) +
                               " observations, have " + std::to_string(returns.size()));
    }
    check_dates_increasing(returns);
    MomentSeries out{EstimationScheme::expanding(min_obs), {}};
    out.entries.reserve(returns.size() - min_obs + 1);
    for (std::size_t last = static_cast<std::size_t>(min_obs) - 1; last < returns.size(); ++last) {
        out.entries.push_back(window_moments(returns, 0, last));
    }
    return out;
}

MomentSeries rolling_moments(std::span<const Dated> returns, int window) {
    if (window < 2) throw ValidationError("rolling estimation requires M >= 2");
    if (returns.size() < static_cast<std::size_t>(window)) {
        throw InsufficientData("need at least " + std::to_string(window) +
                               " observations, have " + std::to_string(returns.size()));
    }
    check_dates_increasing(returns);
    MomentSeries out{EstimationScheme::rolling(window), {}};
    std::size_t m = static_cast<std::size_t>(window);
    out.entries.reserve(returns.size() - m + 1);
    for (std::size_t last = m - 1; last < returns.size(); ++last) {
        out.entries.push_back(window_moments(returns, last - m + 1, last));
    }
    return out;
}

double per_period_rate(double rf_annual, Compounding mode, int periods_per_year) {
    if (periods_per_year < 1) throw ValidationError("periods_per_year must be >= 1");
    if (!(rf_annual > -1.0)) throw ValidationError("annual rate must be > -1");
    double p = static_cast<double>(periods_per_year);
    if (mode == Compounding::Simple) return rf_annual / p;
    return std::pow(1.0 + rf_annual, 1.0 / p) - 1.0;
}

std::vector<RiskAversionPoint> risk_aversion_series(const MomentSeries& m,
                                                    std::span<const MarketRecord> market,
                                                    Compounding mode, int periods_per_year) {
    std::map<YearMonth, const MarketRecord*> by_date;
    for (const MarketRecord& rec : market) by_date[rec.date] = &rec;

    std::vector<RiskAversionPoint> out;
    out.reserve(m.entries.size());
    for (const MomentEntry& e : m.entries) {
        auto it = by_date.find(e.date);
        if (it == by_date.end()) {
            throw AlignmentError("no market record for " + e.date.str());
        }
        const MarketRecord& rec = *it->second;
        double z_tilde = 1.0 + per_period_rate(rec.rf_annual, mode, periods_per_year);
        double lambda = rra_from_relative_ce(e.mu, e.sigma, z_tilde);
        out.push_back({e.date, rec.market_cap, lambda / rec.market_cap, lambda});
    }
    return out;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    if (x.size() < 2) throw InsufficientData("correlation needs at least 2 points");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateError("correlation undefined for a constant series");
    }
    return sxy / std::sqrt(sxx * syy);
}

const char* trend_name(Trend t) {
    switch (t) {
        case Trend::Decreasing: return "Decreasing";
        case Trend::Constant: return "Constant";
        case Trend::Increasing: return "Increasing";
    }
    throw InternalError("unknown trend");
}

TrendResult classify_trend(std::span<const double> wealth, std::span<const double> measure,
                           double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) throw ValidationError("tau must lie in [0, 1)");
    double corr = pearson_correlation(wealth, measure);
    Trend label = Trend::Constant;
    if (corr < -tau) {
        label = Trend::Decreasing;
    } else if (corr > tau) {
        label = Trend::Increasing;
    }
    return {label, corr};
}

std::pair<double, double> split_rra_at(double wealth_cut, std::span<const double> wealth,
                                       std::span<const double> measure) {
    if (wealth.size() != measure.size()) throw ValidationError("split inputs differ in length");
    std::vector<double> wlo, mlo, whi, mhi;
    for (std::size_t i = 0; i < wealth.size(); ++i) {
        if (wealth[i] <= wealth_cut) {
            wlo.push_back(wealth[i]);
            mlo.push_back(measure[i]);
        } else {
            whi.push_back(wealth[i]);
            mhi.push_back(measure[i]);
        }
    }
    if (wlo.size() < 2 || whi.size() < 2) {
        throw InsufficientData("split at " + std::to_string(wealth_cut) +
                               " leaves fewer than 2 points on one side");
    }
    return {pearson_correlation(wlo, mlo), pearson_correlation(whi, mhi)};
}

}  // namespace ra
