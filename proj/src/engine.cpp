#include "dynres/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dynres/rng.hpp"

namespace dynres {

namespace {

constexpr std::uint64_t kTieStream = 5;  // world streams use 0..4

Estimate mean_ci(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs) sum += x;
    double m = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    double se = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) /
                          static_cast<double>(xs.size()));
    return {m, 1.96 * se};
}

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (count <= 0) return;
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

Trajectory simulate_trajectory(const MarketConfig& cfg, const ReservePolicy& policy,
                               const std::vector<Strategy>& strategies, std::uint64_t seed,
                               const SimulateOptions& opts) {
    cfg.validate();
    if (static_cast<int>(strategies.size()) != cfg.n) {
        throw std::invalid_argument("simulate_trajectory: one strategy per agent required");
    }

    World world = draw_world(cfg, seed, &opts.override);
    const ValuationDistribution& dist = cfg.dist(world.s);

    Trajectory traj;
    traj.s = world.s;
    traj.agent_utility.assign(static_cast<std::size_t>(cfg.n), 0.0);
    traj.agent_first_participation.assign(static_cast<std::size_t>(cfg.n), -1);

    std::vector<double> vals = world.valuations;
    std::mt19937_64 redraw_eng(world.redraw_value_seed);
    std::mt19937_64 tie_eng(derive_seed(seed, kTieStream));

    ReservePolicy pol = policy;
    AgentView view{next_reserve(pol)};

    std::vector<std::optional<double>> bids(static_cast<std::size_t>(cfg.n));
    for (int t = 1; t <= cfg.T; ++t) {
        double r = next_reserve(pol);
        for (int i = 0; i < cfg.n; ++i) {
            auto& slot = bids[static_cast<std::size_t>(i)];
            slot.reset();
            if (!world.participates(i, t - 1)) continue;
            ++traj.participation_count;
            if (traj.agent_first_participation[static_cast<std::size_t>(i)] < 0) {
                traj.agent_first_participation[static_cast<std::size_t>(i)] = t;
            }
            // a marked participation redraws the valuation before bidding
            if (world.redraw_mark(i, t - 1)) {
                vals[static_cast<std::size_t>(i)] = dist.sample(redraw_eng);
            }
            double b = decide_bid(strategies[static_cast<std::size_t>(i)],
                                  vals[static_cast<std::size_t>(i)], view, r, t);
            // distributions with unbounded lower tails can price below zero;
            // the auction only accepts nonnegative bids
            slot = std::max(0.0, b);
        }
        auto [rec, next] = run_round(pol, t, std::move(bids), tie_eng);
        bids = std::move(rec.bids);
        pol = std::move(next);

        if (rec.winner >= 0) {
            traj.revenue_total += rec.price;
            double u = vals[static_cast<std::size_t>(rec.winner)] - rec.price;
            traj.buyer_utility_total += u;
            traj.agent_utility[static_cast<std::size_t>(rec.winner)] += u;
        }
        if (pol.triggered && traj.trigger_round < 0) traj.trigger_round = t;
        if (opts.record_rounds) {
            RoundRecord kept = rec;
            kept.bids = bids;  // rec.bids was moved back into the working buffer
            traj.rounds.push_back(std::move(kept));
        }
    }
    return traj;
}

SimulationSummary estimate(const MarketConfig& cfg, const ReservePolicy& policy,
                           const std::vector<Strategy>& strategies, int replications,
                           std::uint64_t seed, int threads) {
    if (replications < 1) throw std::invalid_argument("estimate: need replications >= 1");
    struct Rep {
        double rev{0.0};
        double wel{0.0};
        ItemType s{ItemType::low};
        int trigger{-1};
    };
    std::vector<Rep> reps(static_cast<std::size_t>(replications));
    parallel_for(replications, threads, [&](int r) {
        Trajectory tr = simulate_trajectory(cfg, policy, strategies,
                                            derive_seed(seed, static_cast<std::uint64_t>(r)));
        Rep& out = reps[static_cast<std::size_t>(r)];
        out.rev = tr.revenue_total / cfg.T;
        out.wel = tr.participation_count > 0
                      ? tr.buyer_utility_total / static_cast<double>(tr.participation_count)
                      : 0.0;
        out.s = tr.s;
        out.trigger = tr.trigger_round;
    });

    SimulationSummary sum;
    sum.replications = replications;
    sum.seed = seed;
    std::vector<double> rev, wel, rev_lo, wel_lo, rev_hi, wel_hi;
    rev.reserve(reps.size());
    wel.reserve(reps.size());
    for (const Rep& r : reps) {
        rev.push_back(r.rev);
        wel.push_back(r.wel);
        if (r.s == ItemType::low) {
            rev_lo.push_back(r.rev);
            wel_lo.push_back(r.wel);
        } else {
            rev_hi.push_back(r.rev);
            wel_hi.push_back(r.wel);
        }
        sum.trigger_round_counts[r.trigger] += 1;
    }
    sum.revenue_per_round = mean_ci(rev);
    sum.welfare_per_participation = mean_ci(wel);
    sum.low = {static_cast<long>(rev_lo.size()), mean_ci(rev_lo), mean_ci(wel_lo)};
    sum.high = {static_cast<long>(rev_hi.size()), mean_ci(rev_hi), mean_ci(wel_hi)};
    return sum;
}

GridSearchResult grid_search_static_reserve(const MarketConfig& cfg,
                                            const std::vector<double>& reserves,
                                            int replications, std::uint64_t seed, int threads) {
    if (reserves.empty()) {
        throw std::invalid_argument("grid_search_static_reserve: empty reserve grid");
    }
    GridSearchResult res;
    res.reserves = reserves;
    res.means.resize(reserves.size());
    res.cis.resize(reserves.size());
    std::vector<Strategy> truthful(static_cast<std::size_t>(cfg.n), Strategy::truthful());
    for (std::size_t g = 0; g < reserves.size(); ++g) {
        // same master seed at every grid point: paired comparisons
        SimulationSummary s = estimate(cfg, ReservePolicy::static_reserve(reserves[g]),
                                       truthful, replications, seed, threads);
        res.means[g] = s.revenue_per_round.mean;
        res.cis[g] = s.revenue_per_round.ci_halfwidth;
    }
    res.best_index = static_cast<int>(
        std::max_element(res.means.begin(), res.means.end()) - res.means.begin());
    res.best_reserve = res.reserves[static_cast<std::size_t>(res.best_index)];
    return res;
}

}  // namespace dynres
