#include "dynres/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace dynres {

namespace {

constexpr double kNoBid = -std::numeric_limits<double>::infinity();

struct Scenario {
    double weight{1.0};
    std::array<double, 3> opp_top{kNoBid, kNoBid, kNoBid};  // best present rival bid
    std::array<int, 3> tie_at_top{0, 0, 0};                 // rivals sharing that bid
    std::array<int, 3> join_count{0, 0, 0};  // distinct rivals above rho through round t
};

// Round (1-based) at which the trigger count first reaches k, given agent 0
// joined at own_join (0 = never). T + 1 when it never fires.
int trigger_time(const Scenario& sc, int own_join, int k, int T) {
    for (int t = 1; t <= T; ++t) {
        const int count = sc.join_count[t - 1] + (own_join >= 1 && own_join <= t ? 1 : 0);
        if (count >= k) return t;
    }
    return T + 1;
}

struct Key {
    int t;
    bool low;
    int t0;
    int ts;
    bool operator<(const Key& o) const {
        return std::tie(t, low, t0, ts) < std::tie(o.t, o.low, o.t0, o.ts);
    }
};

struct Dp {
    const std::vector<Scenario>& scenarios;
    const std::vector<double>& bids;
    double v;            // agent 0's valuation this pass
    double alpha0;
    double rho;          // +inf for a static policy: nothing ever joins
    double r_low;
    double r_high;
    int k;
    int T;
    bool truthful_only;  // force bid = v instead of optimizing
    std::map<Key, double>* memo;
    std::vector<OraclePolicyEntry>* entries;  // nullptr in truthful mode
    int value_index;

    bool in_event(const Scenario& sc, const Key& cls) const {
        const int trig = trigger_time(sc, cls.ts, k, T);
        return cls.low ? trig >= cls.t : trig == cls.t0;
    }

    // One-round expected utility against the scenario, at reserve r.
    double round_utility(const Scenario& sc, int t, double b, double r) const {
        if (b < r) return 0.0;
        const double top = sc.opp_top[t - 1];
        if (b > top) return v - std::max(top > kNoBid ? top : r, r);
        if (b == top) return (v - std::max(top, r)) / (1.0 + sc.tie_at_top[t - 1]);
        return 0.0;
    }

    // Unnormalized sum over the class event of the optimal continuation.
    double solve(const Key& cls) {
        if (cls.t > T) return 0.0;
        if (auto it = memo->find(cls); it != memo->end()) return it->second;

        const double r = cls.low ? r_low : r_high;
        double result;
        if (!cls.low) {
            // absorbed: the class event never refines again
            const double cont = solve(Key{cls.t + 1, false, cls.t0, cls.ts});
            double weight = 0.0;
            double best_imm = 0.0;
            bool have_imm = false;
            double truthful_imm = 0.0;
            double best_bid = v;
            for (double b : bids) {
                double imm = 0.0;
                for (const auto& sc : scenarios) {
                    if (!in_event(sc, cls)) continue;
                    imm += sc.weight * round_utility(sc, cls.t, b, r);
                }
                if (b == v) truthful_imm = imm;
                if (!have_imm || imm > best_imm + 1e-12 * (1.0 + std::abs(best_imm)) ||
                    (std::abs(imm - best_imm) <= 1e-12 * (1.0 + std::abs(best_imm)) && b == v)) {
                    have_imm = true;
                    best_imm = imm;
                    best_bid = b;
                }
            }
            for (const auto& sc : scenarios)
                if (in_event(sc, cls)) weight += sc.weight;
            const double chosen = truthful_only ? truthful_imm : best_imm;
            if (!truthful_only && entries && weight > 0.0)
                entries->push_back(OraclePolicyEntry{cls.t, false, cls.t0, cls.ts, value_index,
                                                     best_bid});
            result = (1.0 - alpha0) * cont + alpha0 * (chosen + cont);
        } else {
            const double absent = solve(Key{cls.t + 1, false, cls.t, cls.ts}) +
                                  solve(Key{cls.t + 1, true, 0, cls.ts});
            double weight = 0.0;
            for (const auto& sc : scenarios)
                if (in_event(sc, cls)) weight += sc.weight;
            double best_total = 0.0;
            bool have_total = false;
            double truthful_total = 0.0;
            double best_bid = v;
            for (double b : bids) {
                if (truthful_only && b != v) continue;
                double imm = 0.0;
                for (const auto& sc : scenarios) {
                    if (!in_event(sc, cls)) continue;
                    imm += sc.weight * round_utility(sc, cls.t, b, r);
                }
                const int ts_next = b > rho ? (cls.ts ? cls.ts : cls.t) : cls.ts;
                const double total = imm + solve(Key{cls.t + 1, false, cls.t, ts_next}) +
                                     solve(Key{cls.t + 1, true, 0, ts_next});
                if (b == v) truthful_total = total;
                if (!have_total || total > best_total + 1e-12 * (1.0 + std::abs(best_total)) ||
                    (std::abs(total - best_total) <= 1e-12 * (1.0 + std::abs(best_total)) &&
                     b == v)) {
                    have_total = true;
                    best_total = total;
                    best_bid = b;
                }
            }
            const double chosen = truthful_only ? truthful_total : best_total;
            if (!truthful_only && entries && weight > 0.0)
                entries->push_back(
                    OraclePolicyEntry{cls.t, true, 0, cls.ts, value_index, best_bid});
            result = (1.0 - alpha0) * absent + alpha0 * chosen;
        }
        (*memo)[cls] = result;
        return result;
    }
};

bool grid_contains(const std::vector<double>& grid, double x) {
    for (double g : grid)
        if (std::abs(g - x) <= 1e-12) return true;
    return false;
}

}  // namespace

OracleResult brute_force_best_response(const DiscreteInstance& inst) {
    if (inst.T < 1 || inst.T > 3) throw std::invalid_argument("T must be in [1, 3]");
    if (inst.n < 1 || inst.n > 3) throw std::invalid_argument("n must be in [1, 3]");
    if (inst.own_values.empty()) throw std::invalid_argument("own value grid is empty");
    if (static_cast<int>(inst.alphas.size()) != inst.n)
        throw std::invalid_argument("alphas size must equal n");
    for (double a : inst.alphas)
        if (!(a > 0.0) || a > 1.0) throw std::invalid_argument("alphas must be in (0, 1]");
    if (inst.bid_grid.empty()) throw std::invalid_argument("bid grid is empty");

    std::vector<double> bids = inst.bid_grid;
    std::sort(bids.begin(), bids.end());
    bids.erase(std::unique(bids.begin(), bids.end()), bids.end());
    for (double b : bids)
        if (!std::isfinite(b) || b < 0.0) throw std::invalid_argument("bids must be finite, >= 0");

    const bool is_static = inst.policy.kind == PolicyKind::static_reserve;
    const double rho = is_static ? std::numeric_limits<double>::infinity() : inst.policy.rho;
    const double r_low = is_static ? inst.policy.reserve : inst.policy.r_low;
    const double r_high = is_static ? inst.policy.reserve : inst.policy.r_high;
    const int k = inst.policy.kind == PolicyKind::generalized_threshold ? inst.policy.k : 1;
    if (!grid_contains(bids, r_low) || !grid_contains(bids, r_high))
        throw std::invalid_argument("bid grid must contain the reserve levels");
    for (double v : inst.own_values)
        if (!grid_contains(bids, v))
            throw std::invalid_argument("bid grid must contain every own value");

    // The DP tests bid == value exactly, so values given within tolerance of
    // a grid point are snapped to that grid point.
    const auto snap = [&bids](double x) {
        for (double g : bids)
            if (std::abs(g - x) <= 1e-12) return g;
        return x;
    };
    const double rl = snap(r_low);
    const double rh = snap(r_high);
    std::vector<double> own = inst.own_values;
    for (double& v : own) v = snap(v);

    const int m = inst.n - 1;
    if (m > 0) {
        if (inst.opp_values.empty() || inst.opp_values.size() != inst.opp_weights.size())
            throw std::invalid_argument("opponent values and weights must align");
    }
    double wsum = 0.0;
    for (double w : inst.opp_weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("opponent weights must be nonnegative");
        wsum += w;
    }
    if (m > 0 && !(wsum > 0.0)) throw std::invalid_argument("opponent weights sum to zero");

    const int V = m > 0 ? static_cast<int>(inst.opp_values.size()) : 1;
    long value_combos = 1;
    for (int j = 0; j < m; ++j) value_combos *= V;
    const long scenario_count = value_combos << (m * inst.T);
    if (static_cast<double>(scenario_count) * bids.size() * inst.own_values.size() * inst.T >
        1e6)
        throw StateSpaceOverflow("discrete instance too large for exact enumeration");

    // Enumerate every (opponent values, participation pattern) scenario.
    std::vector<Scenario> scenarios;
    scenarios.reserve(static_cast<std::size_t>(scenario_count));
    std::vector<int> val_idx(std::max(m, 1), 0);
    const int part_limit = 1 << (m * inst.T);
    for (long vi = 0; vi < value_combos; ++vi) {
        long rest = vi;
        double vweight = 1.0;
        for (int j = 0; j < m; ++j) {
            val_idx[j] = static_cast<int>(rest % V);
            rest /= V;
            vweight *= inst.opp_weights[val_idx[j]] / wsum;
        }
        for (int mask = 0; mask < part_limit; ++mask) {
            Scenario sc;
            sc.weight = vweight;
            int joined = 0;
            for (int t = 1; t <= inst.T; ++t) {
                double top = kNoBid;
                int ties = 0;
                for (int j = 0; j < m; ++j) {
                    const bool present = (mask >> (j * inst.T + (t - 1))) & 1;
                    sc.weight *= present ? inst.alphas[j + 1] : 1.0 - inst.alphas[j + 1];
                    if (!present) continue;
                    const double w = inst.opp_values[val_idx[j]];
                    if (w > top) {
                        top = w;
                        ties = 1;
                    } else if (w == top) {
                        ++ties;
                    }
                    if (w > rho) joined |= 1 << j;
                }
                sc.opp_top[t - 1] = top;
                sc.tie_at_top[t - 1] = top > kNoBid ? ties : 0;
                sc.join_count[t - 1] = __builtin_popcount(static_cast<unsigned>(joined));
            }
            scenarios.push_back(sc);
        }
    }

    OracleResult out;
    out.own_values = inst.own_values;
    out.scenario_count = static_cast<long>(scenarios.size());
    const Key root{1, true, 0, 0};
    for (int vi = 0; vi < static_cast<int>(own.size()); ++vi) {
        std::map<Key, double> memo_best, memo_truth;
        Dp dp{scenarios, bids,   own[vi], inst.alphas[0], rho,        rl,
              rh,        k,      inst.T,  false,          &memo_best, &out.policy,
              vi};
        out.best_value.push_back(dp.solve(root));
        out.state_count += static_cast<long>(memo_best.size());
        Dp dt = dp;
        dt.truthful_only = true;
        dt.memo = &memo_truth;
        dt.entries = nullptr;
        out.truthful_value.push_back(dt.solve(root));
    }
    return out;
}

}  // namespace dynres
