#ifndef DYNRES_AGENTS_HPP
#define DYNRES_AGENTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dynres/distributions.hpp"

namespace dynres {

enum class ItemType { low, high };

// Market primitives: n agents over T rounds, agent i present in a round with
// probability alphas[i], item type drawn once per world (high with
// probability p_high), valuations iid from the type's distribution and
// redrawn with probability beta at each participation.
struct MarketConfig {
    int n{0};
    int T{0};
    std::vector<double> alphas;
    double beta{0.0};
    double p_high{0.5};
    ValuationDistribution low{ValuationDistribution::uniform(0.0, 1.0)};
    ValuationDistribution high{ValuationDistribution::uniform(0.0, 1.0)};

    const ValuationDistribution& dist(ItemType s) const {
        return s == ItemType::high ? high : low;
    }
    void validate() const;  // throws std::invalid_argument
};

// Audit hooks: pin the item type and/or one agent's valuation before a
// simulated world is used. The same number of draws is consumed either way,
// so paired runs stay aligned.
struct WorldOverride {
    std::optional<ItemType> force_type;
    std::optional<std::pair<int, double>> force_valuation;
};

// One sampled environment: everything random that does not depend on agent
// behavior. Matrices are round-major (index t * n + i, t zero-based here).
struct World {
    ItemType s{ItemType::low};
    std::vector<double> valuations;
    std::vector<std::uint8_t> participation;
    std::vector<std::uint8_t> redraw;  // empty when beta == 0
    std::uint64_t redraw_value_seed{0};
    int n{0};
    int T{0};

    bool participates(int i, int t) const {
        return participation[static_cast<std::size_t>(t) * n + i] != 0;
    }
    bool redraw_mark(int i, int t) const {
        return !redraw.empty() && redraw[static_cast<std::size_t>(t) * n + i] != 0;
    }
};

World draw_world(const MarketConfig& cfg, std::uint64_t seed,
                 const WorldOverride* override_opt = nullptr);

enum class StrategyKind { truthful, capped, one_shot_shade, scripted };

// Bidding rules. `capped` bids min(v, cap) while the announced reserve has
// not risen above its round-1 level and t <= horizon, truthful afterwards;
// `one_shot_shade` bids min(v, cap) in the single round t == horizon no
// matter what the reserve did; `scripted` plays a fixed bid table (truthful
// past its end).
struct Strategy {
    StrategyKind kind{StrategyKind::truthful};
    double cap{0.0};
    int horizon{0};
    std::vector<double> script;

    static Strategy truthful();
    static Strategy capped(double cap, int horizon);
    static Strategy one_shot(double cap, int round);
    static Strategy scripted(std::vector<double> bids);
};

// The slice of history a strategy may condition on: the agent's own record
// plus publicly announced reserves. The strategies shipped here only need
// the round-1 anchor to detect whether the reserve has risen.
struct AgentView {
    double first_reserve{0.0};
};

double decide_bid(const Strategy& strategy, double v, const AgentView& observed, double reserve,
                  int t);

}  // namespace dynres

#endif
