#ifndef DYNRES_THEORY_HPP
#define DYNRES_THEORY_HPP

#include <cstdint>
#include <vector>

#include "dynres/agents.hpp"
#include "dynres/distributions.hpp"

namespace dynres {

// Sufficient-scale bundle for the plain threshold mechanism under epsilon
// incentive slack. tail_high = P(v > rho | high), and the reserves are the
// per-type optimal ones. All logs are natural.
struct Thm2Params {
    double n0;   // minimum market size: 1 + 1.59 log(2 gap / eps) / tail_high
    double tau;  // ceil((n0 - 1) / ((n - 1) alpha))
    double t0;   // minimum horizon: (2 gap / eps) * tau
};

Thm2Params params_thm2(double eps, double alpha, int n, double tail_high, double r_low_star,
                       double r_high_star);

// Revenue-approximation bundle for the plain threshold mechanism.
// delta = eps / gap, lambda = P(v > rho | low). n2 is the false-trigger
// ceiling delta / lambda, +infinity when lambda == 0 (the threshold can
// never fire on a low item).
struct Thm3Params {
    double delta;
    double n1;  // 1 + 3.18 log(2/delta) / tail_high
    double n2;  // delta / lambda
    double tau;
    double t1;  // (4/delta) * ceil((n1 - 1) / ((n - 1) alpha))
};

Thm3Params params_thm3(double eps, double alpha, int n, double tail_high, double lambda,
                       double r_low_star, double r_high_star);

// Scale bundle for the generalized (k distinct high bidders) threshold.
// Valid under lambda <= tail_high / 18 (hypothesis_ok reports it). The
// trigger count depends on where n falls: k = 2.26 log(2/delta) for
// n in [n3, n4], k = 4 lambda n for n >= n_bar = max(n3, n4).
enum class Thm5Regime { below_range, fixed_k, linear_k };

struct Thm5Params {
    double delta;
    double n3;  // 1 + 8.48 log(2/delta) / tail_high
    double n4;  // 0.56 log(2/delta) / lambda
    double n_bar;
    Thm5Regime regime;
    double k;  // trigger count for the active regime (0 when below range)
    double tau;
    double t1;  // (4/delta) * ceil((n3 - 1) / ((min(n, n_bar) - 1) alpha))
    bool hypothesis_ok;
};

Thm5Params params_thm5(double eps, double alpha, int n, double tail_high, double lambda,
                       double r_low_star, double r_high_star);

// Exact P(Binomial(m, p) >= k) summed in log space.
double binomial_tail_geq(int m, double p, int k);

struct HighBidderProbability {
    double exact;           // P(at least k distinct agents bid above rho within tau rounds)
    double chernoff_bound;  // proof bound on the complement: (delta/2)^(C/1.59)
                            // for k == 1, (delta/2)^(C/4.24) for general k
};

// Probability that, among the n (or n-1 when exclude_one) other agents, at
// least k have participated within tau rounds and hold a valuation above
// rho on a high item: Binomial(m, (1 - (1-alpha)^tau) * tail_high) upper
// tail. The bound column needs the (C, delta) pair the surrounding argument
// is run with, since the raw inputs do not determine it.
HighBidderProbability high_bidder_probability(int n, double alpha, int tau, double tail_high,
                                              int k, bool exclude_one, double delta,
                                              double c_const);

// Earliest round t at which some agent can already be confident the
// threshold fired without them: smallest t with
// max_i [1 - prod_{j != i} (1 - tail_high (1 - (1-alpha_j)^t))] >= 1 - delta,
// capped at (and returning) t_cap when no such round exists.
int t_delta(int n, const std::vector<double>& alphas, double tail_high, double delta, int t_cap);

struct BenchmarkRevenue {
    double reserve_low;   // per-type optimal reserves
    double reserve_high;
    RevenueEstimate low;  // one-round revenue under each type at its reserve
    RevenueEstimate high;
    double blended_mean;  // mixed over the type prior
    double blended_ci;
};

// Known-type upper benchmark: the seller learns the type and posts the
// matching optimal static reserve every round.
BenchmarkRevenue benchmark_revenue(const MarketConfig& cfg, int replications,
                                   std::uint64_t seed);

struct TransientExample {
    double static_revenue;          // T/4
    double advance_charge_revenue;  // (T-1)/2 - eps
};

// Closed forms for the single-bidder uniform market with fully transient
// valuations: the best static reserve (1/2) collects T/4 in expectation,
// while charging (T-1)/2 - eps up front for free rounds collects almost
// twice that. Dynamic mechanisms need bounded buyer patience to beat static
// ones; unboundedly patient designs are out of scope here.
TransientExample transient_counterexample(int T, double epsilon_price);

// Everything the `params` command prints, derived from a market, a trigger
// threshold rho and a slack eps.
struct TheoremParams {
    double eps;
    double rho;
    double r_low_star;
    double r_high_star;
    double gap;
    double tail_high;
    double lambda;
    double delta;
    Thm2Params thm2;
    Thm3Params thm3;
    Thm5Params thm5;
    int t_delta_rounds;
};

// Requires homogeneous participation rates (the scale formulas assume one
// alpha); throws std::domain_error otherwise or when eps is outside
// (0, gap).
TheoremParams compute_theorem_params(const MarketConfig& cfg, double rho, double eps,
                                     double tolerance = 1e-9);

}  // namespace dynres

#endif
