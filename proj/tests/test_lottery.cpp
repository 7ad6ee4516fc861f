#include "ra/lottery.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

#include "ra/errors.hpp"

using namespace ra;

namespace {

DiscreteLottery fair_coin(double stake) { return DiscreteLottery({stake, -stake}, {0.5, 0.5}); }

// Log-utility certainty equivalent of w0 + (fair +-stake coin) has the
// closed form sqrt((w0-stake)(w0+stake)): the independent oracle for the
// bisection-based exact_ce.
double log_ce_oracle(double w0, double stake) { return std::sqrt((w0 - stake) * (w0 + stake)); }

// CARA certainty equivalent of w0 + (fair +-stake coin): w0 - ln(cosh(c*stake))/c.
double cara_ce_oracle(double w0, double c, double stake) {
    return w0 - std::log(std::cosh(c * stake)) / c;
}

}  // namespace

TEST_CASE("lottery validation") {
    CHECK_THROWS_AS(DiscreteLottery({}, {}), ValidationError);
    CHECK_THROWS_AS(DiscreteLottery({1.0, 2.0}, {0.5}), ValidationError);
    CHECK_THROWS_AS(DiscreteLottery({1.0, 2.0}, {0.6, 0.6}), ValidationError);
    CHECK_THROWS_AS(DiscreteLottery({1.0, 2.0}, {-0.1, 1.1}), ValidationError);
    CHECK_NOTHROW(DiscreteLottery({1.0}, {1.0}));
}

TEST_CASE("population moments") {
    Moments m = moments(fair_coin(100.0));
    CHECK(m.mu == doctest::Approx(0.0));
    CHECK(m.sigma == doctest::Approx(100.0));

    m = moments(DiscreteLottery({42.0}, {1.0}));
    CHECK(m.mu == 42.0);
    CHECK(m.sigma == 0.0);

    // +10 or -4 with even odds
    m = moments(DiscreteLottery({10.0, -4.0}, {0.5, 0.5}));
    CHECK(m.mu == doctest::Approx(3.0));
    CHECK(m.sigma == doctest::Approx(7.0));
}

TEST_CASE("exact certainty equivalents against closed-form oracles") {
    double ce = exact_ce(UtilitySpec::log_family(0.0), 1000.0, fair_coin(100.0));
    CHECK(ce == doctest::Approx(log_ce_oracle(1000.0, 100.0)).epsilon(1e-12));
    CHECK(ce == doctest::Approx(994.98743710661995).epsilon(1e-12));

    // riskless lottery: CE equals current wealth
    for (const UtilitySpec& u : {UtilitySpec::log_family(0.0), UtilitySpec::quadratic(1e-4),
                                 UtilitySpec::exponential(0.0, 0.01)}) {
        CHECK(exact_ce(u, 500.0, DiscreteLottery({0.0}, {1.0})) ==
              doctest::Approx(500.0).epsilon(1e-12));
    }

    ce = exact_ce(UtilitySpec::exponential(0.0, 0.001), 1000.0, fair_coin(100.0));
    CHECK(ce == doctest::Approx(cara_ce_oracle(1000.0, 0.001, 100.0)).epsilon(1e-12));
    CHECK(ce == doctest::Approx(995.00831117835347).epsilon(1e-12));
}

TEST_CASE("exact_ce rejects outcomes that leave the utility domain") {
    CHECK_THROWS_AS(exact_ce(UtilitySpec::log_family(0.0), 100.0, fair_coin(150.0)), DomainError);
    CHECK_THROWS_AS(
        exact_ce(UtilitySpec::quadratic(0.2), 1.0, DiscreteLottery({2.0, -0.5}, {0.5, 0.5})),
        DomainError);
}

TEST_CASE("exact risk premium") {
    double p = exact_risk_premium(UtilitySpec::log_family(0.0), 1000.0, fair_coin(100.0));
    CHECK(p == doctest::Approx(1000.0 - log_ce_oracle(1000.0, 100.0)).epsilon(1e-10));
    CHECK(p == doctest::Approx(5.0125628933800453).epsilon(1e-10));

    CHECK(exact_risk_premium(UtilitySpec::sqrt_family(), 77.0, DiscreteLottery({3.0}, {1.0})) ==
          doctest::Approx(0.0));

    p = exact_risk_premium(UtilitySpec::exponential(0.0, 0.001), 1000.0, fair_coin(100.0));
    CHECK(p == doctest::Approx(1000.0 - cara_ce_oracle(1000.0, 0.001, 100.0)).epsilon(1e-10));
    CHECK(p == doctest::Approx(4.9916888216465303).epsilon(1e-10));
}

TEST_CASE("risk premium positivity for strictly concave utilities") {
    std::vector<DiscreteLottery> lotteries = {
        fair_coin(10.0),
        DiscreteLottery({25.0, -10.0}, {0.3, 0.7}),
        DiscreteLottery({5.0, 1.0, -6.0}, {0.2, 0.5, 0.3}),
    };
    std::vector<UtilitySpec> families = {
        UtilitySpec::log_family(0.0),       UtilitySpec::quadratic(1e-3),
        UtilitySpec::power(1.0, 0.5),       UtilitySpec::neg_power(1.0, 2.0),
        UtilitySpec::sqrt_family(),         UtilitySpec::exponential(0.0, 0.01),
    };
    for (const UtilitySpec& u : families) {
        for (const DiscreteLottery& lot : lotteries) {
            CAPTURE(u.str());
            CHECK(exact_risk_premium(u, 150.0, lot) > 0.0);
        }
    }
}

TEST_CASE("fair approximation (premium = r sigma^2 / 2)") {
    CHECK(approx_premium_fair(UtilitySpec::log_family(0.0), 1000.0, 100.0) ==
          doctest::Approx(5.0));
    CHECK(approx_premium_fair(UtilitySpec::power(2.0, 0.3), 50.0, 0.0) == 0.0);
    // CARA premium is independent of wealth, bit for bit
    UtilitySpec cara = UtilitySpec::exponential(0.0, 0.001);
    double p = approx_premium_fair(cara, 123.0, 100.0);
    CHECK(p == doctest::Approx(5.0));
    CHECK(p == approx_premium_fair(cara, 98765.0, 100.0));
}

TEST_CASE("non-fair approximation (premium = r (mu^2 + sigma^2) / 2)") {
    UtilitySpec lg = UtilitySpec::log_family(0.0);
    // mu = 0 reduces to the fair formula exactly
    CHECK(approx_premium_nonfair(lg, 1000.0, {0.0, 100.0}) ==
          approx_premium_fair(lg, 1000.0, 100.0));
    CHECK(approx_premium_nonfair(lg, 1000.0, {10.0, 100.0}) == doctest::Approx(5.05));
    // r = 2b/(1-2bW) = 0.00025 at b=1e-4, W=1000
    CHECK(approx_premium_nonfair(UtilitySpec::quadratic(1e-4), 1000.0, {10.0, 100.0}) ==
          doctest::Approx(1.2625));
}

TEST_CASE("ara_from_ce inverts the non-fair approximation") {
    CHECK(ara_from_ce(1000.0, 0.0, 100.0, 994.98743710661995) ==
          doctest::Approx(0.0010025125786760091).epsilon(1e-12));
    CHECK(ara_from_ce(1000.0, 7.0, 30.0, 1007.0) == 0.0);  // risk-neutral CE
    CHECK(ara_from_ce(1000.0, 10.0, 100.0, 1004.95) == doctest::Approx(0.001).epsilon(1e-12));
    CHECK_THROWS_AS(ara_from_ce(1000.0, 0.0, 0.0, 1000.0), DegenerateError);
}

TEST_CASE("relative premium (Wr(sigma_R^2 + mu_R^2) / 2)") {
    CHECK(relative_premium(UtilitySpec::log_family(0.0), 321.0, {0.01, 0.04}) ==
          doctest::Approx(0.00085).epsilon(1e-12));
    CHECK(relative_premium(UtilitySpec::sqrt_family(), 77.0, {0.0, 0.0}) == 0.0);
    CHECK(relative_premium(UtilitySpec::sqrt_family(), 5000.0, {0.01, 0.04}) ==
          doctest::Approx(0.000425).epsilon(1e-12));
    CHECK_THROWS_AS(relative_premium(UtilitySpec::log_family(0.0), -3.0, {0.01, 0.04}),
                    DomainError);
}

TEST_CASE("relative premium times wealth matches absolute approximation") {
    UtilitySpec families[] = {UtilitySpec::log_family(0.0), UtilitySpec::sqrt_family(),
                              UtilitySpec::power(1.0, 0.5), UtilitySpec::exponential(0.0, 1e-3)};
    double w0s[] = {10.0, 400.0, 12345.0};
    for (const UtilitySpec& u : families) {
        for (double w0 : w0s) {
            Moments rel{0.013, 0.05};
            double lhs = relative_premium(u, w0, rel) * w0;
            double rhs = approx_premium_nonfair(u, w0, {w0 * rel.mu, w0 * rel.sigma});
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
    }
}

TEST_CASE("rra_from_relative_ce") {
    CHECK(rra_from_relative_ce(0.008, 0.04, 1.002) ==
          doctest::Approx(7.2115384615384617).epsilon(1e-12));
    CHECK(rra_from_relative_ce(0.008, 0.04, 1.008) == 0.0);  // CE absorbs the whole mean
    CHECK(rra_from_relative_ce(0.002, 0.03, 1.01) < 0.0);    // returned, never clamped
    CHECK_THROWS_AS(rra_from_relative_ce(0.0, 0.0, 1.0), DegenerateError);
}

TEST_CASE("rra_from_relative_ce recovers lambda = 1 from a log agent's exact CE") {
    // The residual deviation is O(mu_R + mu_R^2/sigma_R^2), so the shape
    // keeps the mean small next to the spread.
    UtilitySpec lg = UtilitySpec::log_family(0.0);
    double prev_gap = 1.0;
    for (double scale : {1.0, 0.5, 0.25, 0.125}) {
        DiscreteLottery lot =
            DiscreteLottery({0.05, 0.002, -0.045}, {0.3, 0.4, 0.3}).scaled(scale);
        Moments m = moments(lot);
        double z_tilde = exact_ce(lg, 1.0, lot);  // w0 = 1, so already per unit wealth
        double lambda = rra_from_relative_ce(m.mu, m.sigma, z_tilde);
        double gap = std::abs(lambda - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.01);
}

TEST_CASE("second-order accuracy: scaled-lottery error ratios stay in [4, 16]") {
    // Zero-mean but skewed shape; the surviving remainder is third-order, so
    // halving the scale divides the error by about 8.
    DiscreteLottery shape({1.0, -2.0}, {2.0 / 3.0, 1.0 / 3.0});
    const double w0 = 1000.0;

    auto premium_error = [&](const UtilitySpec& u, double t) {
        DiscreteLottery lot = shape.scaled(t);
        return std::abs(exact_risk_premium(u, w0, lot) -
                        approx_premium_nonfair(u, w0, moments(lot)));
    };

    UtilitySpec smooth[] = {UtilitySpec::log_family(0.0), UtilitySpec::power(1.0, 0.5),
                            UtilitySpec::neg_power(1.0, 2.0),
                            UtilitySpec::exponential(0.0, 0.001)};
    for (const UtilitySpec& u : smooth) {
        CAPTURE(u.str());
        double e64 = premium_error(u, 64.0);
        double e32 = premium_error(u, 32.0);
        double e16 = premium_error(u, 16.0);
        CHECK(e64 > e32);
        CHECK(e32 > e16);
        CHECK(e64 / e32 >= 4.0);
        CHECK(e64 / e32 <= 16.0);
        CHECK(e32 / e16 >= 4.0);
        CHECK(e32 / e16 <= 16.0);
    }

    // Quadratic's only remainder is the dropped (mu - rho)^2 term; the ratio
    // sits just under 16. Larger scales keep it clear of the boundary.
    UtilitySpec quad = UtilitySpec::quadratic(1e-4);
    double q128 = premium_error(quad, 128.0);
    double q64 = premium_error(quad, 64.0);
    double q32 = premium_error(quad, 32.0);
    CHECK(q128 / q64 >= 4.0);
    CHECK(q128 / q64 <= 16.0);
    CHECK(q64 / q32 >= 4.0);
    CHECK(q64 / q32 <= 16.0);
}

TEST_CASE("consistency chain: ara_from_ce converges to ara as the lottery shrinks") {
    // Zero-mean skewed shape: a nonzero mean would leave a scale-invariant
    // mu^2/(mu^2+sigma^2) bias in the recovered coefficient.
    DiscreteLottery shape({2.0, -4.0 / 3.0}, {0.4, 0.6});
    UtilitySpec families[] = {UtilitySpec::log_family(0.0), UtilitySpec::power(1.0, 0.5),
                              UtilitySpec::exponential(0.0, 0.001)};
    const double w0 = 1000.0;
    for (const UtilitySpec& u : families) {
        CAPTURE(u.str());
        double truth = ara(u, w0);
        double prev_gap = 1e300;
        for (double t : {8.0, 4.0, 2.0, 1.0, 0.5, 0.25}) {
            DiscreteLottery lot = shape.scaled(t);
            Moments m = moments(lot);
            double recovered = ara_from_ce(w0, m.mu, m.sigma, exact_ce(u, w0, lot));
            double gap = std::abs(recovered - truth);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        CHECK(prev_gap <= 0.01 * truth);
    }
}
