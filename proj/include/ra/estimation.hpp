// Market time series -> ARA/RRA series. Moment estimation over expanding
// (recursive) or rolling windows, per-period risk-aversion extraction,
// and correlation-based trend diagnostics.
//
// All operations are pure over immutable series; identical inputs produce
// bit-identical outputs.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ra/yearmonth.hpp"

namespace ra {

// One period of market data.
struct MarketRecord {
    YearMonth date;
    double ret = 0.0;         // per-period simple return, > -1
    double market_cap = 0.0;  // wealth units (whatever the input file uses), > 0
    double rf_annual = 0.0;   // annualized risk-free yield, > -1
};

struct Dated {
    YearMonth date;
    double value = 0.0;
};

struct EstimationScheme {
    enum class Kind { Expanding, Rolling };
    Kind kind = Kind::Expanding;
    int param = 24;  // min_obs for expanding, window length M for rolling

    static EstimationScheme expanding(int min_obs) { return {Kind::Expanding, min_obs}; }
    static EstimationScheme rolling(int window) { return {Kind::Rolling, window}; }
    std::string str() const;
};

struct MomentEntry {
    YearMonth date;
    double mu = 0.0;
    double sigma = 0.0;  // sample standard deviation, (n-1) denominator
};

struct MomentSeries {
    EstimationScheme scheme;
    std::vector<MomentEntry> entries;  // strictly increasing dates
};

// Entry at date t uses all observations up to and including t; the first
// entry is emitted at the min_obs-th observation (min_obs >= 2).
MomentSeries expanding_moments(std::span<const Dated> returns, int min_obs);

// Entry at date t uses exactly the M most recent observations ending at t;
// yields N - M + 1 entries (N >= M >= 2).
MomentSeries rolling_moments(std::span<const Dated> returns, int window);

struct RiskAversionPoint {
    YearMonth date;
    double wealth = 0.0;  // market cap
    double ara = 0.0;     // == rra / wealth, by construction
    double rra = 0.0;
};

enum class Compounding { Geometric, Simple };

// Annualized yield -> per-period rate. Geometric: (1+rf)^(1/periods) - 1;
// simple: rf / periods.
double per_period_rate(double rf_annual, Compounding mode, int periods_per_year = 12);

// Per moment entry: z_tilde = 1 + per-period rf of the matching market
// record, rra from the non-fair closed form, ara = rra / market_cap.
// Throws AlignmentError when a moment date has no market record.
std::vector<RiskAversionPoint> risk_aversion_series(const MomentSeries& m,
                                                    std::span<const MarketRecord> market,
                                                    Compounding mode,
                                                    int periods_per_year = 12);

// Standard Pearson coefficient. Requires equal lengths >= 2; throws
// DegenerateError when either series is constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

enum class Trend { Decreasing, Constant, Increasing };

const char* trend_name(Trend t);

struct TrendResult {
    Trend label = Trend::Constant;
    double corr = 0.0;  // always reported alongside the label
};

// Decreasing if corr < -tau, Increasing if corr > +tau, else Constant.
TrendResult classify_trend(std::span<const double> wealth, std::span<const double> measure,
                           double tau);

// Pearson correlation computed separately on points with wealth <= cut and
// wealth > cut. Throws InsufficientData when either side has < 2 points.
std::pair<double, double> split_rra_at(double wealth_cut, std::span<const double> wealth,
                                       std::span<const double> measure);

}  // namespace ra
