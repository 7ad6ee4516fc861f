#include "ra/lottery.hpp"

#include <cmath>
#include <sstream>

#include "ra/errors.hpp"

namespace ra {

DiscreteLottery::DiscreteLottery(std::vector<double> outcomes, std::vector<double> probabilities)
    : outcomes_(std::move(outcomes)), probabilities_(std::move(probabilities)) {
    if (outcomes_.empty() || outcomes_.size() != probabilities_.size()) {
        throw ValidationError("lottery needs equal, nonzero outcome/probability counts");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < probabilities_.size(); ++i) {
        double p = probabilities_[i];
        if (!std::isfinite(p) || p < 0.0) {
            throw ValidationError("lottery probability at index " + std::to_string(i) +
                                  " is negative or non-finite");
        }
        if (!std::isfinite(outcomes_[i])) {
            throw ValidationError("lottery outcome at index " + std::to_string(i) +
                                  " is non-finite");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "lottery probabilities sum to " << total << ", expected 1";
        throw ValidationError(os.str());
    }
}

DiscreteLottery DiscreteLottery::scaled(double t) const {
    std::vector<double> xs(outcomes_);
    for (double& x : xs) x *= t;
    return DiscreteLottery(std::move(xs), probabilities_);
}

Moments moments(const DiscreteLottery& lot) {
    double mu = 0.0;
    for (std::size_t i = 0; i < lot.size(); ++i) {
        mu += lot.probabilities()[i] * lot.outcomes()[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < lot.size(); ++i) {
        double d = lot.outcomes()[i] - mu;
        var += lot.probabilities()[i] * d * d;
    }
    return {mu, std::sqrt(var)};
}

double exact_ce(const UtilitySpec& u, double w0, const DiscreteLottery& lot) {
    double eu = 0.0;
    for (std::size_t i = 0; i < lot.size(); ++i) {
        double w1 = w0 + lot.outcomes()[i];
        if (!u.in_domain(w1)) {
            std::ostringstream os;
            os << "outcome " << lot.outcomes()[i] << " drives wealth " << w1
               << " outside domain of " << u.str();
            throw DomainError(os.str());
        }
        eu += lot.probabilities()[i] * evaluate(u, w1).value;
    }
    return invert(u, eu);
}

double exact_risk_premium(const UtilitySpec& u, double w0, const DiscreteLottery& lot) {
    return w0 + moments(lot).mu - exact_ce(u, w0, lot);
}

double approx_premium_fair(const UtilitySpec& u, double w0, double sigma_z) {
    if (!(sigma_z >= 0.0)) throw ValidationError("sigma must be >= 0");
    return approx_premium_nonfair(u, w0, Moments{0.0, sigma_z});
}

double approx_premium_nonfair(const UtilitySpec& u, double w0, const Moments& m) {
    return 0.5 * ara(u, w0) * (m.mu * m.mu + m.sigma * m.sigma);
}

double ara_from_ce(double w0, double mu_z, double sigma_z, double z0) {
    double denom = mu_z * mu_z + sigma_z * sigma_z;
    if (denom == 0.0) {
        throw DegenerateError("riskless zero-mean lottery carries no curvature information");
    }
    return 2.0 * (w0 + mu_z - z0) / denom;
}

double relative_premium(const UtilitySpec& u, double w0, const Moments& m_r) {
    if (!(w0 > 0.0)) throw DomainError("relative premium requires w0 > 0");
    return 0.5 * ara(u, w0) * w0 * (m_r.mu * m_r.mu + m_r.sigma * m_r.sigma);
}

double rra_from_relative_ce(double mu_r, double sigma_r, double z_tilde) {
    double denom = mu_r * mu_r + sigma_r * sigma_r;
    if (denom == 0.0) {
        throw DegenerateError("riskless zero-mean return lottery carries no curvature information");
    }
    return 2.0 * (1.0 + mu_r - z_tilde) / denom;
}

}  // namespace ra
