// Two-asset (risky + risk-free) optimal weights: closed forms for the
// quadratic, log, square-root and exponential utilities, plus a numeric
// expected-utility maximizer used as an independent oracle.
//
// Wealth is normalized to w0 = 1, so weights are fractions of wealth;
// values above 1 mean leverage, negative values mean short-selling.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "ra/estimation.hpp"
#include "ra/lottery.hpp"
#include "ra/utility.hpp"

namespace ra {

struct MarketParams {
    double mu_r = 0.0;     // per-period mean risky return
    double sigma_r = 0.0;  // per-period std deviation, >= 0
    double rf = 0.0;       // per-period risk-free rate, > -1
};

struct WeightResult {
    double w_s = 0.0;    // fraction of wealth in the risky asset
    std::string family;  // canonical family text, e.g. "quadratic:b=0.2"
};

// Shared denominator of all closed forms:
// D = mu^2 + sigma^2 - 2 mu rf + rf^2 = (mu - rf)^2 + sigma^2.
double weight_denominator(const MarketParams& p);

// w = [(mu - rf) - 2b (1+rf)(mu - rf)] / (2b D). Exact optimum for
// U(W) = W - bW^2 (zero Taylor remainder). Throws DegenerateError if D == 0.
WeightResult weight_quadratic(double b, const MarketParams& p);

// w = (1+rf)(mu - rf) / D, the second-order expansion around w = 0 of
// log-utility expected wealth.
WeightResult weight_log(const MarketParams& p);

// Exactly 2 * weight_log (the printed identity, not a re-derivation).
WeightResult weight_sqrt(const MarketParams& p);

// Exactly weight_log / (2 (1+rf)); the exponential here is U(W) = -e^{-2W}.
WeightResult weight_exponential(const MarketParams& p);

// Numeric oracle: maximize sum_i p_i U((1+rf) + w (r_i - rf)) by bracketed
// root-finding on the stationarity condition E[U'(W1)(R - rf)] = 0, which
// is strictly decreasing in w. The search bracket [-20, 20] is intersected
// with the interval keeping every W1 inside u's domain.
// Throws NoInteriorOptimum when the condition has no sign change in the
// feasible bracket and DomainError when the feasible bracket is empty.
WeightResult weight_numeric(const UtilitySpec& u, const DiscreteLottery& ret_lottery, double rf);

// Closed-form weight family selector for per-date series.
struct WeightFamily {
    enum class Kind { Quadratic, Log, Sqrt, Exponential };
    Kind kind = Kind::Log;
    double b = 0.0;  // quadratic only

    // "quadratic:b=<v>", "log", "sqrt", "exp".
    static WeightFamily parse(std::string_view text);
    std::string str() const;
};

struct DatedWeight {
    YearMonth date;
    double w_s = 0.0;
};

// Apply the chosen closed form per date; rf_series must cover every moment
// date (per-period rates). Throws AlignmentError on missing dates.
std::vector<DatedWeight> weight_series(const WeightFamily& family, const MomentSeries& m,
                                       std::span<const Dated> rf_series);

}  // namespace ra
