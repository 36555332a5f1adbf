#ifndef DYNRES_ORACLE_HPP
#define DYNRES_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "dynres/auction.hpp"

namespace dynres {

// A fully discrete toy market for exact best-response computation. Agent 0
// is the optimizer; the other n-1 agents bid truthfully with valuations
// drawn once from (opp_values, opp_weights) and participation Bernoulli
// per round. Agent 0's valuation is fixed per grid point. Valuations are
// never redrawn.
struct DiscreteInstance {
    int T{1};  // <= 3
    int n{1};  // <= 3
    std::vector<double> own_values;
    std::vector<double> opp_values;
    std::vector<double> opp_weights;
    std::vector<double> alphas;  // size n, agent 0 first
    std::vector<double> bid_grid;
    ReservePolicy policy{ReservePolicy::static_reserve(0.0)};
};

struct OraclePolicyEntry {
    int t{0};
    bool reserve_low{true};
    int trigger_round{0};   // round after which the reserve rose (0 while low)
    int own_join_round{0};  // first round own bid exceeded rho (0 if not yet)
    int value_index{0};
    double bid{0.0};
};

struct OracleResult {
    std::vector<double> own_values;
    std::vector<double> truthful_value;
    std::vector<double> best_value;
    std::vector<OraclePolicyEntry> policy;
    long scenario_count{0};
    long state_count{0};
};

struct StateSpaceOverflow : std::domain_error {
    using std::domain_error::domain_error;
};

// Exact dynamic program over (round, reserve state, own information). The
// reserve state is what agent 0 can observe of the mechanism: whether the
// reserve is still low, when it rose, and whether the agent's own past bids
// crossed rho. Conditional on that state the posterior over opponents is
// computed by exact enumeration of their valuations and participation
// patterns, so the returned values are exact up to floating point. Within
// a round, expectations include the uniform tie split. Bids at or above the
// reserve are allocated; bids strictly above rho feed the trigger.
//
// The bid grid must contain every own value and the policy's reserve
// levels. Throws StateSpaceOverflow when scenarios * bids * values * T
// exceeds 1e6.
OracleResult brute_force_best_response(const DiscreteInstance& inst);

}  // namespace dynres

#endif
