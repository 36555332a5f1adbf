#include "dynres/agents.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dynres/rng.hpp"

namespace dynres {

void MarketConfig::validate() const {
    if (n < 1) throw std::invalid_argument("market: need n >= 1");
    if (T < 1) throw std::invalid_argument("market: need T >= 1");
    if (static_cast<int>(alphas.size()) != n) {
        throw std::invalid_argument("market: alphas must have one entry per agent");
    }
    for (double a : alphas) {
        if (!(a > 0.0) || a > 1.0) {
            throw std::invalid_argument("market: participation rates must lie in (0,1]");
        }
    }
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("market: beta must lie in [0,1]");
    if (p_high < 0.0 || p_high > 1.0) {
        throw std::invalid_argument("market: p_high must lie in [0,1]");
    }
}

namespace {

// Child stream indices under a world seed. Fixed forever: reordering them
// changes every seeded result.
constexpr std::uint64_t kTypeStream = 0;
constexpr std::uint64_t kValuationStream = 1;
constexpr std::uint64_t kParticipationStream = 2;
constexpr std::uint64_t kRedrawMarkStream = 3;
constexpr std::uint64_t kRedrawValueStream = 4;

}  // namespace

World draw_world(const MarketConfig& cfg, std::uint64_t seed, const WorldOverride* override_opt) {
    cfg.validate();
    World w;
    w.n = cfg.n;
    w.T = cfg.T;

    {
        std::mt19937_64 eng(derive_seed(seed, kTypeStream));
        w.s = bernoulli(eng, cfg.p_high) ? ItemType::high : ItemType::low;
    }
    if (override_opt && override_opt->force_type) w.s = *override_opt->force_type;

    const ValuationDistribution& d = cfg.dist(w.s);
    {
        std::mt19937_64 eng(derive_seed(seed, kValuationStream));
        w.valuations.resize(static_cast<std::size_t>(cfg.n));
        for (auto& v : w.valuations) v = d.sample(eng);
    }
    if (override_opt && override_opt->force_valuation) {
        auto [agent, value] = *override_opt->force_valuation;
        if (agent < 0 || agent >= cfg.n) {
            throw std::invalid_argument("draw_world: valuation override agent out of range");
        }
        w.valuations[static_cast<std::size_t>(agent)] = value;
    }

    {
        std::mt19937_64 eng(derive_seed(seed, kParticipationStream));
        w.participation.resize(static_cast<std::size_t>(cfg.n) * cfg.T);
        for (int t = 0; t < cfg.T; ++t) {
            for (int i = 0; i < cfg.n; ++i) {
                w.participation[static_cast<std::size_t>(t) * cfg.n + i] =
                    bernoulli(eng, cfg.alphas[static_cast<std::size_t>(i)]) ? 1 : 0;
            }
        }
    }
    if (cfg.beta > 0.0) {
        std::mt19937_64 eng(derive_seed(seed, kRedrawMarkStream));
        w.redraw.resize(static_cast<std::size_t>(cfg.n) * cfg.T);
        for (auto& m : w.redraw) m = bernoulli(eng, cfg.beta) ? 1 : 0;
    }
    w.redraw_value_seed = derive_seed(seed, kRedrawValueStream);
    return w;
}

Strategy Strategy::truthful() { return Strategy{}; }

Strategy Strategy::capped(double cap, int horizon) {
    if (cap < 0.0) throw std::invalid_argument("capped: cap must be >= 0");
    if (horizon < 1) throw std::invalid_argument("capped: horizon must be >= 1");
    Strategy s;
    s.kind = StrategyKind::capped;
    s.cap = cap;
    s.horizon = horizon;
    return s;
}

Strategy Strategy::one_shot(double cap, int round) {
    if (cap < 0.0) throw std::invalid_argument("one_shot: cap must be >= 0");
    if (round < 1) throw std::invalid_argument("one_shot: round must be >= 1");
    Strategy s;
    s.kind = StrategyKind::one_shot_shade;
    s.cap = cap;
    s.horizon = round;
    return s;
}

Strategy Strategy::scripted(std::vector<double> bids) {
    for (double b : bids) {
        if (b < 0.0) throw std::invalid_argument("scripted: bids must be >= 0");
    }
    Strategy s;
    s.kind = StrategyKind::scripted;
    s.script = std::move(bids);
    return s;
}

double decide_bid(const Strategy& strategy, double v, const AgentView& observed, double reserve,
                  int t) {
    if (t < 1) throw std::invalid_argument("decide_bid: rounds are 1-based");
    switch (strategy.kind) {
        case StrategyKind::truthful:
            return v;
        case StrategyKind::capped:
            // shading is pointless once the reserve has risen: the cap only
            // binds while the announced reserve still sits at its initial level
            if (reserve <= observed.first_reserve && t <= strategy.horizon) {
                return std::min(v, strategy.cap);
            }
            return v;
        case StrategyKind::one_shot_shade:
            // unlike capped, fires regardless of the announced reserve, so a
            // deviation can be probed after the reserve has already risen
            if (t == strategy.horizon) {
                return std::min(v, strategy.cap);
            }
            return v;
        case StrategyKind::scripted:
            if (static_cast<std::size_t>(t) <= strategy.script.size()) {
                return strategy.script[static_cast<std::size_t>(t) - 1];
            }
            return v;
    }
    return v;
}

}  // namespace dynres
