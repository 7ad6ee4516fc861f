// Self-contained synthetic validation suites (Taylor convergence, oracle
// recovery, closed-form identities, estimator contracts, determinism) and
// the fixture generators they share with the tests.
#pragma once

#include <string>
#include <vector>

#include "ra/data_io.hpp"
#include "ra/estimation.hpp"

namespace ra {

struct Tolerances {
    // Implementation-accuracy tolerances (tightened 10x by --profile strict).
    double oracle_weight_abs = 1e-8;     // quadratic closed form vs numeric optimum
    double invert_roundtrip_rel = 1e-10; // invert(evaluate(w)) vs w
    // Method-error bands (properties of the mathematics, not of the code;
    // profiles leave them alone).
    double taylor_rel_err = 0.003;       // fair-coin premium, log utility
    double recovery_band = 0.10;         // |lambda - 1| for the log-agent market
    double split_corr_below = 0.85;
    double tau = 0.2;

    static Tolerances defaults() { return {}; }
    static Tolerances strict();
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Synthetic market generated from a log-utility (CRRA, lambda == 1) agent:
// seeded returns, i.i.d. market caps, and per-period yields backed out of
// the agent's exact certainty equivalent over the same windows the given
// scheme will use. Extraction with that scheme recovers lambda ~ 1.
MarketDataset make_log_agent_market(int n_periods, const EstimationScheme& scheme,
                                    unsigned seed = 20240901);

// Market whose extracted RRA rises with a monotonically growing market cap
// up to `cap_break`, then drops to a lower (negative) level: reproduces the
// rise-then-drop split pattern. Yields are backed out of the target RRA
// path, so extraction returns it exactly.
MarketDataset make_regime_break_market(int n_periods, double cap_break,
                                       const EstimationScheme& scheme,
                                       unsigned seed = 20240902);

std::vector<SuiteResult> run_validation_suites(const Tolerances& tol);

}  // namespace ra
