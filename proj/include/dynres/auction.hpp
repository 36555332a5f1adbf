#ifndef DYNRES_AUCTION_HPP
#define DYNRES_AUCTION_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dynres {

enum class PolicyKind { static_reserve, threshold, generalized_threshold };

// Reserve price process. Static keeps one reserve forever. Threshold starts
// at r_low and moves to r_high permanently once enough distinct agents have
// bid strictly above rho (one agent for the plain threshold, k for the
// generalized form). A bid exactly equal to rho never counts.
struct ReservePolicy {
    PolicyKind kind{PolicyKind::static_reserve};
    double reserve{0.0};   // static only
    double rho{0.0};
    double r_low{0.0};
    double r_high{0.0};
    int k{1};
    bool triggered{false};
    std::vector<std::uint8_t> seen_high;  // per-agent flags, generalized only

    static ReservePolicy static_reserve(double r);
    static ReservePolicy threshold(double rho, double r_low, double r_high);
    static ReservePolicy generalized(double rho, double r_low, double r_high, int k, int n);
};

// Reserve the policy will post for the coming round.
double next_reserve(const ReservePolicy& policy);

// Outcome of one round. Absent agents carry no bid; an all-absent round has
// winner -1 and price 0. `triggered` reports the policy state after the
// round's bids were folded in.
struct RoundRecord {
    int t{0};
    double reserve{0.0};
    int winner{-1};
    double price{0.0};
    bool triggered{false};
    std::vector<std::optional<double>> bids;
};

// Clears one second-price round under the policy's current reserve and
// returns the advanced policy. The item goes to a uniformly chosen maximal
// bidder when the top bid clears the reserve; a bid exactly at the reserve
// is allocated. One tie-break draw is consumed whenever at least one agent
// is present, winner unique or not, so paired simulations that share a
// participation pattern stay stream-aligned. Throws std::invalid_argument
// on negative bids.
std::pair<RoundRecord, ReservePolicy> run_round(const ReservePolicy& policy, int t,
                                                std::vector<std::optional<double>> bids,
                                                std::mt19937_64& tie_rng);

std::string round_record_csv_header();
std::string round_record_csv_row(const RoundRecord& rec);

}  // namespace dynres

#endif
