#ifndef DYNRES_ENGINE_HPP
#define DYNRES_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "dynres/agents.hpp"
#include "dynres/auction.hpp"

namespace dynres {

struct SimulateOptions {
    bool record_rounds{false};
    WorldOverride override;
};

// One simulated market path. trigger_round is the 1-based round whose bids
// fired the threshold (-1 if it never fired); the raised reserve applies
// from trigger_round + 1 on.
struct Trajectory {
    ItemType s{ItemType::low};
    int trigger_round{-1};
    double revenue_total{0.0};
    double buyer_utility_total{0.0};
    long participation_count{0};
    std::vector<double> agent_utility;
    std::vector<int> agent_first_participation;  // 1-based, -1 if never present
    std::vector<RoundRecord> rounds;             // filled only when recorded
};

// Runs T rounds of the policy against the given strategy profile on the
// world drawn from `seed`. The same seed yields the same world and the same
// tie-break stream no matter which strategies are plugged in, so strategy
// comparisons pair cleanly.
Trajectory simulate_trajectory(const MarketConfig& cfg, const ReservePolicy& policy,
                               const std::vector<Strategy>& strategies, std::uint64_t seed,
                               const SimulateOptions& opts = {});

struct Estimate {
    double mean{0.0};
    double ci_halfwidth{0.0};
};

struct TypeStats {
    long count{0};
    Estimate revenue_per_round;
    Estimate welfare_per_participation;
};

struct SimulationSummary {
    int replications{0};
    std::uint64_t seed{0};
    Estimate revenue_per_round;
    Estimate welfare_per_participation;  // buyer utility per round of presence
    TypeStats low;
    TypeStats high;
    std::map<int, long> trigger_round_counts;  // key -1 counts never-triggered paths
};

// Monte Carlo over replications. Replication r runs on derive_seed(seed, r);
// aggregation walks results in replication order, so the summary is
// bit-identical for a fixed (config, policy, strategies, replications, seed)
// across any thread count or scheduling.
SimulationSummary estimate(const MarketConfig& cfg, const ReservePolicy& policy,
                           const std::vector<Strategy>& strategies, int replications,
                           std::uint64_t seed, int threads);

struct GridSearchResult {
    std::vector<double> reserves;
    std::vector<double> means;
    std::vector<double> cis;
    int best_index{0};
    double best_reserve{0.0};
};

// Revenue of the static policy at every reserve on the grid, truthful
// bidders, all grid points paired on the same replication seeds.
GridSearchResult grid_search_static_reserve(const MarketConfig& cfg,
                                            const std::vector<double>& reserves,
                                            int replications, std::uint64_t seed, int threads);

// Deterministic helper: runs body(0..count-1) on up to `threads` workers.
// Results must be written to per-index slots; ordering of side effects is
// unspecified.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace dynres

#endif
