#include "dynres/auction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dynres/rng.hpp"

namespace dynres {

ReservePolicy ReservePolicy::static_reserve(double r) {
    if (r < 0.0) throw std::invalid_argument("static_reserve: reserve must be >= 0");
    ReservePolicy p;
    p.kind = PolicyKind::static_reserve;
    p.reserve = r;
    return p;
}

ReservePolicy ReservePolicy::threshold(double rho, double r_low, double r_high) {
    if (r_low < 0.0 || r_high < r_low) {
        throw std::invalid_argument("threshold: need 0 <= r_low <= r_high");
    }
    ReservePolicy p;
    p.kind = PolicyKind::threshold;
    p.rho = rho;
    p.r_low = r_low;
    p.r_high = r_high;
    p.k = 1;
    return p;
}

ReservePolicy ReservePolicy::generalized(double rho, double r_low, double r_high, int k, int n) {
    if (r_low < 0.0 || r_high < r_low) {
        throw std::invalid_argument("generalized: need 0 <= r_low <= r_high");
    }
    if (k < 1 || n < 1) throw std::invalid_argument("generalized: need k >= 1 and n >= 1");
    ReservePolicy p;
    p.kind = PolicyKind::generalized_threshold;
    p.rho = rho;
    p.r_low = r_low;
    p.r_high = r_high;
    p.k = k;
    p.seen_high.assign(static_cast<std::size_t>(n), 0);
    return p;
}

double next_reserve(const ReservePolicy& policy) {
    if (policy.kind == PolicyKind::static_reserve) return policy.reserve;
    return policy.triggered ? policy.r_high : policy.r_low;
}

std::pair<RoundRecord, ReservePolicy> run_round(const ReservePolicy& policy, int t,
                                                std::vector<std::optional<double>> bids,
                                                std::mt19937_64& tie_rng) {
    const double r = next_reserve(policy);
    if (policy.kind == PolicyKind::generalized_threshold &&
        bids.size() != policy.seen_high.size()) {
        throw std::invalid_argument("run_round: bid vector size must match agent count");
    }

    double best = -1.0;
    int present = 0;
    for (const auto& b : bids) {
        if (!b.has_value()) continue;
        if (*b < 0.0 || !std::isfinite(*b)) {
            throw std::invalid_argument("run_round: bids must be finite and >= 0");
        }
        ++present;
        best = std::max(best, *b);
    }

    RoundRecord rec;
    rec.t = t;
    rec.reserve = r;

    int winner = -1;
    if (present > 0) {
        int ties = 0;
        for (const auto& b : bids) {
            if (b.has_value() && *b == best) ++ties;
        }
        // exactly one draw per round with any presence; see header
        double u = u01(tie_rng);
        if (best >= r) {
            int pick = std::min(static_cast<int>(u * ties), ties - 1);
            for (std::size_t i = 0; i < bids.size(); ++i) {
                if (bids[i].has_value() && *bids[i] == best && pick-- == 0) {
                    winner = static_cast<int>(i);
                    break;
                }
            }
            double second = -1.0;
            for (std::size_t i = 0; i < bids.size(); ++i) {
                if (static_cast<int>(i) == winner || !bids[i].has_value()) continue;
                second = std::max(second, *bids[i]);
            }
            rec.winner = winner;
            rec.price = std::max(second, r);
        }
    }

    ReservePolicy next = policy;
    if (policy.kind != PolicyKind::static_reserve && !next.triggered) {
        if (policy.kind == PolicyKind::threshold) {
            for (const auto& b : bids) {
                if (b.has_value() && *b > policy.rho) {
                    next.triggered = true;
                    break;
                }
            }
        } else {
            int distinct = 0;
            for (std::size_t i = 0; i < bids.size(); ++i) {
                if (bids[i].has_value() && *bids[i] > policy.rho) next.seen_high[i] = 1;
            }
            for (auto f : next.seen_high) distinct += f;
            if (distinct >= next.k) next.triggered = true;
        }
    }
    rec.triggered = next.triggered;
    rec.bids = std::move(bids);
    return {std::move(rec), std::move(next)};
}

std::string round_record_csv_header() { return "t,reserve,winner,price,triggered"; }

std::string round_record_csv_row(const RoundRecord& rec) {
    std::ostringstream os;
    os.precision(17);
    os << rec.t << ',' << rec.reserve << ',' << rec.winner << ',' << rec.price << ','
       << (rec.triggered ? 1 : 0);
    return os.str();
}

}  // namespace dynres
