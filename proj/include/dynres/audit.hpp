#ifndef DYNRES_AUDIT_HPP
#define DYNRES_AUDIT_HPP

#include <cstdint>
#include <vector>

#include "dynres/engine.hpp"

namespace dynres {

// The shading family the audits search over: truthful first, then capped
// strategies crossing caps (quantiles of `dist` below rho, plus a bid just
// under rho) with shading horizons {1, tau, T}. Exact best response is a
// stochastic dynamic program, so this family is the tractable stand-in; it
// covers the trigger-avoiding deviations that the threshold mechanisms make
// tempting.
std::vector<Strategy> make_capped_family(const ValuationDistribution& dist, double rho, int tau,
                                         int T, int cap_count = 4);

struct ValuationGain {
    double valuation{0.0};
    double truthful_utility{0.0};
    double truthful_ci{0.0};
    double best_gain{0.0};  // max over the family of mean paired gain
    double best_gain_ci{0.0};
    int best_member{0};  // index into the family
};

struct RoundGain {
    int t{0};  // deviation round (a first participation)
    bool reserve_low{false};
    long cells{0};
    double mean_gain{0.0};
    double ci{0.0};
    double mean_allowance{0.0};  // eps * alpha_i * (T - t), averaged over cells
};

// Output of both audits. The static audit fills `valuations` and the
// certified epsilon; the dynamic audit fills `rounds` and the good-realization
// frequency. Both certify an empirical lower bound on deviation incentives:
// estimates carry Monte Carlo CIs and only range over the supplied family.
struct ICReport {
    int agent{-1};  // -1 when the audit spans all agents
    double normalizer{0.0};  // T * alpha_agent
    std::vector<ValuationGain> valuations;
    double certified_epsilon{0.0};  // max best_gain / normalizer over the grid
    double certified_epsilon_ci{0.0};
    std::vector<RoundGain> rounds;
    double good_frequency{0.0};
    double good_frequency_ci{0.0};
    long realizations{0};
    long borderline_cells{0};  // gains within 1e-9 of their allowance, still good
    double epsilon{0.0};  // dynamic audit inputs, echoed
    double delta{0.0};
};

// Measures how much `agent` can gain over truthful play for each grid
// valuation (held fixed across paired replications while everything else is
// resampled), conditioned on the item type. Others bid truthfully.
ICReport static_ic_gap(const MarketConfig& cfg, const ReservePolicy& policy, int agent,
                       ItemType s, const std::vector<double>& valuation_grid,
                       const std::vector<Strategy>& family, int replications,
                       std::uint64_t seed, int threads = 1);

// Samples whole realizations and measures, for every agent at their first
// participation round t, the realized gain of switching to each family
// member from round t on. A realization is epsilon-good when every such gain
// stays within eps * alpha_i * (T - t); the report's good frequency is
// compared against 1 - delta. Rows are grouped by round and by whether the
// reserve was still at its low level when the deviation started.
ICReport dynamic_ic_audit(const MarketConfig& cfg, const ReservePolicy& policy, double eps,
                          double delta, const std::vector<Strategy>& family, int replications,
                          std::uint64_t seed, int threads = 1);

}  // namespace dynres

#endif
