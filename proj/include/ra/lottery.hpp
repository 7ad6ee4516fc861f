// Discrete lotteries, exact certainty equivalents, and the second-order
// risk-premium approximations for fair and non-fair lotteries together
// with their inversions to ARA/RRA.
#pragma once

#include <vector>

#include "ra/utility.hpp"

namespace ra {

// Finite lottery: outcome/probability pairs. Outcomes are absolute payoffs
// (wealth units) or return fractions depending on context.
class DiscreteLottery {
public:
    // Probabilities must be >= 0 and sum to 1 within 1e-12; lengths equal
    // and nonzero. Throws ValidationError.
    DiscreteLottery(std::vector<double> outcomes, std::vector<double> probabilities);

    const std::vector<double>& outcomes() const { return outcomes_; }
    const std::vector<double>& probabilities() const { return probabilities_; }
    std::size_t size() const { return outcomes_.size(); }

    // Same shape with outcomes multiplied by t.
    DiscreteLottery scaled(double t) const;

private:
    std::vector<double> outcomes_;
    std::vector<double> probabilities_;
};

struct Moments {
    double mu = 0.0;
    double sigma = 0.0;  // >= 0
};

// Population moments (probabilities are exact, so no (n-1) correction).
Moments moments(const DiscreteLottery& lot);

// Exact certainty equivalent of final wealth w0 + Z, in wealth units:
// the z0 with U(z0) = sum_i p_i U(w0 + x_i), found through invert().
double exact_ce(const UtilitySpec& u, double w0, const DiscreteLottery& lot);

// Exact risk premium w0 + mu_Z - exact_ce(u, w0, lot). Strictly positive
// for sigma > 0 under strict concavity.
double exact_risk_premium(const UtilitySpec& u, double w0, const DiscreteLottery& lot);

// Second-order premium for a fair (zero-mean) lottery: (1/2) r(w0) sigma^2.
double approx_premium_fair(const UtilitySpec& u, double w0, double sigma_z);

// Second-order premium for a non-fair lottery: (1/2) r(w0) (mu^2 + sigma^2).
// With mu = 0 this reduces bit-for-bit to approx_premium_fair.
double approx_premium_nonfair(const UtilitySpec& u, double w0, const Moments& m);

// Invert the non-fair approximation for ARA given an observed certainty
// equivalent z0:  r(w0) ~ 2 (w0 + mu - z0) / (mu^2 + sigma^2).
// Throws DegenerateError when mu^2 + sigma^2 == 0.
double ara_from_ce(double w0, double mu_z, double sigma_z, double z0);

// Relative premium for a return lottery R: (1/2) r(w0) w0 (mu_R^2 + sigma_R^2).
double relative_premium(const UtilitySpec& u, double w0, const Moments& m_r);

// RRA from relative moments and a gross per-period risk-free return
// z_tilde (~ 1 + r_f):  lambda = 2 (1 + mu_R - z_tilde) / (mu_R^2 + sigma_R^2).
// Negative results are returned as-is; the diagnostics layer flags them.
double rra_from_relative_ce(double mu_r, double sigma_r, double z_tilde);

}  // namespace ra
