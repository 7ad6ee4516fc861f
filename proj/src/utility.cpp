#include "ra/utility.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ra/errors.hpp"

namespace ra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const UtilitySpec& u, double w) {
    std::ostringstream os;
    os << "w=" << w << " outside domain of " << u.str();
    return os.str();
}

}  // namespace

UtilitySpec UtilitySpec::quadratic(double b) {
    if (!(b > 0.0)) throw ValidationError("quadratic utility requires b > 0");
    return {Family::Quadratic, 0.0, b, 0.0};
}

UtilitySpec UtilitySpec::log_family(double a) {
    if (!(a >= 0.0)) throw ValidationError("log utility requires a >= 0");
    return {Family::Log, a, 0.0, 0.0};
}

UtilitySpec UtilitySpec::power(double a, double c) {
    if (!(a > 0.0)) throw ValidationError("power utility requires a > 0");
    if (!(c > 0.0 && c < 1.0)) throw ValidationError("power utility requires 0 < c < 1");
    return {Family::Power, a, 0.0, c};
}

UtilitySpec UtilitySpec::neg_power(double a, double c) {
    if (!(a > 0.0)) throw ValidationError("negpower utility requires a > 0");
    if (!(c > 0.0)) throw ValidationError("negpower utility requires c > 0");
    return {Family::NegPower, a, 0.0, c};
}

UtilitySpec UtilitySpec::sqrt_family() { return {Family::Sqrt, 0.0, 0.0, 0.5}; }

UtilitySpec UtilitySpec::exponential(double a, double c) {
    if (!(a >= 0.0)) throw ValidationError("exponential utility requires a >= 0");
    if (!(c > 0.0)) throw ValidationError("exponential utility requires c > 0");
    return {Family::Exponential, a, 0.0, c};
}

double UtilitySpec::domain_lower() const {
    switch (family_) {
        case Family::Quadratic: return -kInf;
        case Family::Log:
        case Family::Power:
        case Family::NegPower:
        case Family::Sqrt: return -a_;
        case Family::Exponential: return -kInf;
    }
    throw InternalError("unknown family");
}

double UtilitySpec::domain_upper() const {
    if (family_ == Family::Quadratic) return 1.0 / (2.0 * b_);
    return kInf;
}

bool UtilitySpec::in_domain(double w) const {
    return std::isfinite(w) && w > domain_lower() && w < domain_upper();
}

double UtilitySpec::range_lower() const {
    switch (family_) {
        case Family::Quadratic: return -kInf;
        case Family::Log: return -kInf;
        case Family::Power:
        case Family::Sqrt: return 0.0;
        case Family::NegPower: return -kInf;
        case Family::Exponential: return -std::exp(-c_ * (domain_lower() + a_));  // == -inf
    }
    throw InternalError("unknown family");
}

double UtilitySpec::range_upper() const {
    switch (family_) {
        case Family::Quadratic: return 1.0 / (4.0 * b_);
        case Family::Log: return kInf;
        case Family::Power:
        case Family::Sqrt: return kInf;
        case Family::NegPower: return 0.0;
        case Family::Exponential: return 0.0;
    }
    throw InternalError("unknown family");
}

std::string UtilitySpec::str() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Quadratic: os << "quadratic:b=" << b_; break;
        case Family::Log: os << "log:a=" << a_; break;
        case Family::Power: os << "power:a=" << a_ << ",c=" << c_; break;
        case Family::NegPower: os << "negpower:a=" << a_ << ",c=" << c_; break;
        case Family::Sqrt: os << "sqrt"; break;
        case Family::Exponential: os << "exp:a=" << a_ << ",c=" << c_; break;
    }
    return os.str();
}

namespace {

// "a=1,c=0.5" -> named values, order-insensitive.
struct ParamList {
    std::vector<std::pair<std::string, double>> items;

    static ParamList parse(std::string_view text, std::string_view context) {
        ParamList out;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            std::string_view item =
                text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
            auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw ParseError("bad utility parameter '" + std::string(item) + "' in '" +
                                 std::string(context) + "'");
            }
            std::string name(item.substr(0, eq));
            std::string value(item.substr(eq + 1));
            try {
                std::size_t used = 0;
                double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument("trailing");
                out.items.emplace_back(name, v);
            } catch (const std::exception&) {
                throw ParseError("bad numeric value '" + value + "' in '" + std::string(context) +
                                 "'");
            }
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return out;
    }

    double get(const std::string& name, std::string_view context) const {
        for (const auto& [k, v] : items) {
            if (k == name) return v;
        }
        throw ParseError("missing parameter '" + name + "' in '" + std::string(context) + "'");
    }
};

}  // namespace

UtilitySpec UtilitySpec::parse(std::string_view text) {
    auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    std::string_view params =
        colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (name == "sqrt") {
        if (!params.empty()) throw ParseError("sqrt takes no parameters");
        return sqrt_family();
    }
    ParamList list = ParamList::parse(params, text);
    if (name == "quadratic") return quadratic(list.get("b", text));
    if (name == "log") return log_family(list.get("a", text));
    if (name == "power") return power(list.get("a", text), list.get("c", text));
    if (name == "negpower") return neg_power(list.get("a", text), list.get("c", text));
    if (name == "exp") return exponential(list.get("a", text), list.get("c", text));
    throw ParseError("unknown utility family '" + std::string(name) + "'");
}

Evaluation evaluate(const UtilitySpec& u, double w) {
    if (!u.in_domain(w)) throw DomainError(describe(u, w));
    switch (u.family()) {
        case Family::Quadratic: {
            double b = u.b();
            return {w - b * w * w, 1.0 - 2.0 * b * w, -2.0 * b};
        }
        case Family::Log: {
            double s = w + u.a();
            return {std::log(s), 1.0 / s, -1.0 / (s * s)};
        }
        case Family::Power:
        case Family::Sqrt: {
            double s = w + u.a();
            double c = u.c();
            double v = std::pow(s, c);
            return {v, c * v / s, c * (c - 1.0) * v / (s * s)};
        }
        case Family::NegPower: {
            double s = w + u.a();
            double c = u.c();
            double v = std::pow(s, -c);
            return {-v, c * v / s, -c * (c + 1.0) * v / (s * s)};
        }
        case Family::Exponential: {
            double c = u.c();
            double e = std::exp(-c * (w + u.a()));
            return {-e, c * e, -c * c * e};
        }
    }
    throw InternalError("unknown family");
}

double ara(const UtilitySpec& u, double w) {
    if (!u.in_domain(w)) throw DomainError(describe(u, w));
    switch (u.family()) {
        case Family::Quadratic: return 2.0 * u.b() / (1.0 - 2.0 * u.b() * w);
        case Family::Log: return 1.0 / (w + u.a());
        case Family::Power:
        case Family::Sqrt: return (1.0 - u.c()) / (w + u.a());
        case Family::NegPower: return (1.0 + u.c()) / (w + u.a());
        case Family::Exponential: return u.c();
    }
    throw InternalError("unknown family");
}

double rra(const UtilitySpec& u, double w) {
    if (!(w > 0.0)) throw DomainError("rra requires w > 0");
    return w * ara(u, w);
}

namespace {

// Expand from an interior anchor until U brackets the target. The range
// precheck in invert() guarantees a bracket exists in exact arithmetic.
struct Bracket {
    double lo, hi;
};

double interior_anchor(const UtilitySpec& u) {
    double lo = u.domain_lower();
    double hi = u.domain_upper();
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi - 1.0;
    if (std::isinf(hi)) return lo + 1.0;
    return 0.5 * (lo + hi);
}

Bracket bracket_target(const UtilitySpec& u, double target) {
    double dlo = u.domain_lower();
    double dhi = u.domain_upper();
    double lo = interior_anchor(u);
    double hi = lo;

    const int cap = 1100;
    int iter = 0;
    // Grow hi until U(hi) >= target.
    double step = 1.0;
    while (evaluate(u, hi).value < target) {
        if (++iter > cap) throw ConvergenceError("bracket expansion failed (upper)");
        hi = std::isinf(dhi) ? hi + step : dhi - (dhi - hi) * 0.5;
        step *= 2.0;
    }
    // Grow lo until U(lo) <= target.
    step = 1.0;
    iter = 0;
    while (evaluate(u, lo).value > target) {
        if (++iter > cap) throw ConvergenceError("bracket expansion failed (lower)");
        lo = std::isinf(dlo) ? lo - step : dlo + (lo - dlo) * 0.5;
        step *= 2.0;
    }
    return {lo, hi};
}

}  // namespace

double invert(const UtilitySpec& u, double target) {
    if (!std::isfinite(target) || target <= u.range_lower() || target >= u.range_upper()) {
        std::ostringstream os;
        os << "target " << target << " outside range of " << u.str();
        throw RangeError(os.str());
    }

    auto [lo, hi] = bracket_target(u, target);
    const double tol = 1e-12 * (1.0 + std::abs(target));
    const int max_iter = 200;

    // Converge in both coordinates: the residual tolerance alone would stop
    // far from the root where U is nearly flat.
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < max_iter; ++i) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket collapsed to adjacent doubles
        double v = evaluate(u, mid).value;
        if (std::abs(v - target) <= tol &&
            hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) {
            return mid;
        }
        if (v < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (std::abs(evaluate(u, mid).value - target) <= tol) return mid;
    throw ConvergenceError("utility inversion did not reach tolerance for " + u.str());
}

}  // namespace ra
