// Parametric utility families with closed-form derivatives, pointwise
// absolute/relative risk aversion, and monotone inversion.
//
// Families (all strictly increasing and strictly concave on their domain):
//
//   quadratic   U(W) = W - b W^2,        b > 0,            W < 1/(2b)
//   log         U(W) = log(W + a),       a >= 0,           W > -a
//   power       U(W) = (W + a)^c,        a > 0, 0 < c < 1, W > -a
//   negpower    U(W) = -(W + a)^-c,      a > 0, c > 0,     W > -a
//   sqrt        U(W) = sqrt(W),                            W > 0
//   exp         U(W) = -exp(-c (W + a)), a >= 0, c > 0,    any W
//
// sqrt shares the power code path (a = 0, c = 1/2) but keeps its own
// family tag. All functions are pure; safe to call concurrently.
#pragma once

#include <string>
#include <string_view>

namespace ra {

enum class Family { Quadratic, Log, Power, NegPower, Sqrt, Exponential };

class UtilitySpec {
public:
    static UtilitySpec quadratic(double b);
    static UtilitySpec log_family(double a);
    static UtilitySpec power(double a, double c);
    static UtilitySpec neg_power(double a, double c);
    static UtilitySpec sqrt_family();
    static UtilitySpec exponential(double a, double c);

    Family family() const { return family_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }

    // Open domain interval on which U' > 0; +-infinity where unbounded.
    double domain_lower() const;
    double domain_upper() const;
    bool in_domain(double w) const;

    // Open range of U over the domain (U is a strictly increasing bijection
    // from the domain onto the range).
    double range_lower() const;
    double range_upper() const;

    // Canonical text form used by the CLI, e.g. "quadratic:b=0.2",
    // "power:a=1,c=0.5", "sqrt", "exp:a=0,c=2".
    std::string str() const;
    static UtilitySpec parse(std::string_view text);

private:
    UtilitySpec(Family f, double a, double b, double c) : family_(f), a_(a), b_(b), c_(c) {}
    Family family_;
    double a_, b_, c_;
};

struct Evaluation {
    double value;
    double first;   // U'(w), > 0 on the domain
    double second;  // U''(w), < 0 on the domain
};

// U, U', U'' at w. Throws DomainError outside the valid domain.
Evaluation evaluate(const UtilitySpec& u, double w);

// Absolute risk aversion -U''/U', evaluated through the family's analytic
// closed form (so CARA families return their coefficient exactly).
double ara(const UtilitySpec& u, double w);

// Relative risk aversion w * ara(u, w); requires w > 0.
double rra(const UtilitySpec& u, double w);

// Solve U(w) = target by bracketed bisection on the monotone U.
// Residual tolerance 1e-12 * (1 + |target|), iteration cap 200.
// Throws RangeError when target is outside U's range, ConvergenceError
// if the cap is exhausted without meeting the tolerance.
double invert(const UtilitySpec& u, double target);

}  // namespace ra
