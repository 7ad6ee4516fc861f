#include "ra/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ra/errors.hpp"

namespace ra {

namespace {

void check_params(const MarketParams& p) {
    if (!(p.sigma_r >= 0.0)) throw ValidationError("sigma_r must be >= 0");
    if (!(p.rf > -1.0)) throw ValidationError("rf must be > -1");
}

double denom_or_throw(const MarketParams& p) {
    double d = weight_denominator(p);
    if (d == 0.0) {
        throw DegenerateError("risky asset is riskless and identical to the risk-free rate");
    }
    return d;
}

}  // namespace

double weight_denominator(const MarketParams& p) {
    return p.mu_r * p.mu_r + p.sigma_r * p.sigma_r - 2.0 * p.mu_r * p.rf + p.rf * p.rf;
}

WeightResult weight_quadratic(double b, const MarketParams& p) {
    if (!(b > 0.0)) throw ValidationError("quadratic weight requires b > 0");
    check_params(p);
    double d = denom_or_throw(p);
    double excess = p.mu_r - p.rf;
    double w = (excess - 2.0 * b * (1.0 + p.rf) * excess) / (2.0 * b * d);
    std::ostringstream os;
    os << "quadratic:b=" << b;
    return {w, os.str()};
}

WeightResult weight_log(const MarketParams& p) {
    check_params(p);
    double d = denom_or_throw(p);
    return {(1.0 + p.rf) * (p.mu_r - p.rf) / d, "log"};
}

WeightResult weight_sqrt(const MarketParams& p) {
    return {2.0 * weight_log(p).w_s, "sqrt"};
}

WeightResult weight_exponential(const MarketParams& p) {
    return {weight_log(p).w_s / (2.0 * (1.0 + p.rf)), "exp"};
}

namespace {

// Interval of weights keeping W1 = base + w d inside (lo, hi) for one outcome.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

Interval feasible_for_outcome(double base, double d, double dom_lo, double dom_hi) {
    Interval iv;
    if (d > 0.0) {
        if (std::isfinite(dom_lo)) iv.lo = (dom_lo - base) / d;
        if (std::isfinite(dom_hi)) iv.hi = (dom_hi - base) / d;
    } else if (d < 0.0) {
        if (std::isfinite(dom_hi)) iv.lo = (dom_hi - base) / d;
        if (std::isfinite(dom_lo)) iv.hi = (dom_lo - base) / d;
    } else if (!(base > dom_lo && base < dom_hi)) {
        iv.lo = 1.0;
        iv.hi = -1.0;  // empty
    }
    return iv;
}

}  // namespace

WeightResult weight_numeric(const UtilitySpec& u, const DiscreteLottery& ret_lottery, double rf) {
    if (!(rf > -1.0)) throw ValidationError("rf must be > -1");
    const double base = 1.0 + rf;
    const double dom_lo = u.domain_lower();
    const double dom_hi = u.domain_upper();

    double lo = -20.0, hi = 20.0;
    for (std::size_t i = 0; i < ret_lottery.size(); ++i) {
        Interval iv =
            feasible_for_outcome(base, ret_lottery.outcomes()[i] - rf, dom_lo, dom_hi);
        lo = std::max(lo, iv.lo);
        hi = std::min(hi, iv.hi);
    }
    if (!(lo < hi)) {
        throw DomainError("no weight keeps final wealth inside the domain of " + u.str());
    }
    // Stay strictly interior so U' is evaluated away from the boundary.
    double margin = 1e-9 * (hi - lo);
    lo += margin;
    hi -= margin;

    auto foc = [&](double w) {
        double g = 0.0;
        for (std::size_t i = 0; i < ret_lottery.size(); ++i) {
            double d = ret_lottery.outcomes()[i] - rf;
            g += ret_lottery.probabilities()[i] * evaluate(u, base + w * d).first * d;
        }
        return g;
    };

    double glo = foc(lo);
    double ghi = foc(hi);
    if (glo == 0.0) return {lo, u.str()};
    if (ghi == 0.0) return {hi, u.str()};
    // g is strictly decreasing, so an interior root needs g(lo) > 0 > g(hi).
    if (!(glo > 0.0 && ghi < 0.0)) {
        throw NoInteriorOptimum("expected-utility stationarity has no sign change in [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double g = foc(mid);
        if (g > 0.0) {
            lo = mid;
        } else if (g < 0.0) {
            hi = mid;
        } else {
            return {mid, u.str()};
        }
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
    }
    return {0.5 * (lo + hi), u.str()};
}

WeightFamily WeightFamily::parse(std::string_view text) {
    if (text == "log") return {Kind::Log, 0.0};
    if (text == "sqrt") return {Kind::Sqrt, 0.0};
    if (text == "exp") return {Kind::Exponential, 0.0};
    if (text.rfind("quadratic:", 0) == 0) {
        std::string_view rest = text.substr(10);
        if (rest.rfind("b=", 0) != 0) {
            throw ParseError("quadratic weight family needs b=<value>, got '" + std::string(text) +
                             "'");
        }
        std::string value(rest.substr(2));
        try {
            std::size_t used = 0;
            double b = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing");
            if (!(b > 0.0)) throw ValidationError("quadratic weight family requires b > 0");
            return {Kind::Quadratic, b};
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("bad numeric value in '" + std::string(text) + "'");
        }
    }
    throw ParseError("unknown weight family '" + std::string(text) +
                     "' (expected quadratic:b=<v>, log, sqrt, exp)");
}

std::string WeightFamily::str() const {
    switch (kind) {
        case Kind::Quadratic: {
            std::ostringstream os;
            os << "quadratic:b=" << b;
            return os.str();
        }
        case Kind::Log: return "log";
        case Kind::Sqrt: return "sqrt";
        case Kind::Exponential: return "exp";
    }
    throw InternalError("unknown weight family");
}

std::vector<DatedWeight> weight_series(const WeightFamily& family, const MomentSeries& m,
                                       std::span<const Dated> rf_series) {
    std::map<YearMonth, double> rf_by_date;
    for (const Dated& d : rf_series) rf_by_date[d.date] = d.value;

    std::vector<DatedWeight> out;
    out.reserve(m.entries.size());
    for (const MomentEntry& e : m.entries) {
        auto it = rf_by_date.find(e.date);
        if (it == rf_by_date.end()) {
            throw AlignmentError("no risk-free rate for " + e.date.str());
        }
        MarketParams p{e.mu, e.sigma, it->second};
        double w = 0.0;
        switch (family.kind) {
            case WeightFamily::Kind::Quadratic: w = weight_quadratic(family.b, p).w_s; break;
            case WeightFamily::Kind::Log: w = weight_log(p).w_s; break;
            case WeightFamily::Kind::Sqrt: w = weight_sqrt(p).w_s; break;
            case WeightFamily::Kind::Exponential: w = weight_exponential(p).w_s; break;
        }
        out.push_back({e.date, w});
    }
    return out;
}

}  // namespace ra
