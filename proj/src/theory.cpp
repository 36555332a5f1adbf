#include "dynres/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dynres/rng.hpp"

namespace dynres {

namespace {

void check_common(double eps, double alpha, int n, double tail_high, double gap) {
    if (n < 2) throw std::domain_error("market size must be at least 2");
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("alpha must be in (0, 1]");
    if (!(tail_high > 0.0) || tail_high > 1.0)
        throw std::domain_error("tail_high must be in (0, 1]");
    if (!(gap > 0.0)) throw std::domain_error("reserve gap must be positive");
    if (!(eps > 0.0) || eps >= gap) throw std::domain_error("eps must be in (0, gap)");
}

double ceil_ratio(double num, double den) { return std::ceil(num / den); }

}  // namespace

Thm2Params params_thm2(double eps, double alpha, int n, double tail_high, double r_low_star,
                       double r_high_star) {
    const double gap = r_high_star - r_low_star;
    check_common(eps, alpha, n, tail_high, gap);
    Thm2Params p;
    p.n0 = 1.0 + 1.59 * std::log(2.0 * gap / eps) / tail_high;
    p.tau = ceil_ratio(p.n0 - 1.0, (n - 1) * alpha);
    p.t0 = (2.0 * gap / eps) * p.tau;
    return p;
}

Thm3Params params_thm3(double eps, double alpha, int n, double tail_high, double lambda,
                       double r_low_star, double r_high_star) {
    const double gap = r_high_star - r_low_star;
    check_common(eps, alpha, n, tail_high, gap);
    if (lambda < 0.0 || lambda > 1.0) throw std::domain_error("lambda must be in [0, 1]");
    Thm3Params p;
    p.delta = eps / gap;
    p.n1 = 1.0 + 3.18 * std::log(2.0 / p.delta) / tail_high;
    p.n2 = lambda == 0.0 ? std::numeric_limits<double>::infinity() : p.delta / lambda;
    p.tau = ceil_ratio(p.n1 - 1.0, (n - 1) * alpha);
    p.t1 = (4.0 / p.delta) * p.tau;
    return p;
}

Thm5Params params_thm5(double eps, double alpha, int n, double tail_high, double lambda,
                       double r_low_star, double r_high_star) {
    const double gap = r_high_star - r_low_star;
    check_common(eps, alpha, n, tail_high, gap);
    if (lambda < 0.0 || lambda > 1.0) throw std::domain_error("lambda must be in [0, 1]");
    Thm5Params p;
    p.delta = eps / gap;
    const double log_term = std::log(2.0 / p.delta);
    p.n3 = 1.0 + 8.48 * log_term / tail_high;
    p.n4 = lambda == 0.0 ? 0.0 : 0.56 * log_term / lambda;
    p.n_bar = std::max(p.n3, p.n4);
    p.hypothesis_ok = lambda <= tail_high / 18.0;
    if (n < p.n3) {
        p.regime = Thm5Regime::below_range;
        p.k = 0.0;
    } else if (n >= p.n_bar) {
        p.regime = Thm5Regime::linear_k;
        p.k = 4.0 * lambda * n;
    } else {
        p.regime = Thm5Regime::fixed_k;
        p.k = 2.26 * log_term;
    }
    const double n_eff = std::min(static_cast<double>(n), p.n_bar);
    p.tau = ceil_ratio(p.n3 - 1.0, (n_eff - 1.0) * alpha);
    p.t1 = (4.0 / p.delta) * p.tau;
    return p;
}

double binomial_tail_geq(int m, double p, int k) {
    if (m < 0) throw std::domain_error("binomial count must be nonnegative");
    if (p < 0.0 || p > 1.0) throw std::domain_error("binomial p must be in [0, 1]");
    if (k <= 0) return 1.0;
    if (k > m) return 0.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double lg_m1 = std::lgamma(m + 1.0);
    // Sum whichever tail is shorter, in log space term by term.
    auto term = [&](int j) {
        return std::exp(lg_m1 - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) + j * log_p +
                        (m - j) * log_q);
    };
    if (k > m * p) {
        double sum = 0.0;
        for (int j = m; j >= k; --j) sum += term(j);
        return std::min(1.0, sum);
    }
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += term(j);
    return std::max(0.0, 1.0 - sum);
}

HighBidderProbability high_bidder_probability(int n, double alpha, int tau, double tail_high,
                                              int k, bool exclude_one, double delta,
                                              double c_const) {
    if (n < 1) throw std::domain_error("market size must be at least 1");
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("alpha must be in (0, 1]");
    if (tau < 1) throw std::domain_error("tau must be at least 1");
    if (!(tail_high > 0.0) || tail_high > 1.0)
        throw std::domain_error("tail_high must be in (0, 1]");
    if (k < 1) throw std::domain_error("k must be at least 1");
    if (!(delta > 0.0) || delta >= 1.0) throw std::domain_error("delta must be in (0, 1)");
    if (!(c_const > 0.0)) throw std::domain_error("C must be positive");
    const int m = exclude_one ? n - 1 : n;
    const double p_one = (1.0 - std::pow(1.0 - alpha, tau)) * tail_high;
    HighBidderProbability out;
    out.exact = binomial_tail_geq(m, p_one, k);
    const double divisor = k == 1 ? 1.59 : 4.24;
    out.chernoff_bound = std::pow(delta / 2.0, c_const / divisor);
    return out;
}

int t_delta(int n, const std::vector<double>& alphas, double tail_high, double delta,
            int t_cap) {
    if (n < 2) throw std::domain_error("market size must be at least 2");
    if (static_cast<int>(alphas.size()) != n)
        throw std::domain_error("alphas size must equal market size");
    for (double a : alphas)
        if (!(a > 0.0) || a > 1.0) throw std::domain_error("alpha must be in (0, 1]");
    if (!(tail_high > 0.0) || tail_high > 1.0)
        throw std::domain_error("tail_high must be in (0, 1]");
    if (!(delta > 0.0) || delta >= 1.0) throw std::domain_error("delta must be in (0, 1)");
    if (t_cap < 1) throw std::domain_error("t_cap must be at least 1");
    // miss[j] = (1 - alpha_j)^t, updated incrementally.
    std::vector<double> miss(alphas.size(), 1.0);
    for (int t = 1; t <= t_cap; ++t) {
        for (std::size_t j = 0; j < miss.size(); ++j) miss[j] *= 1.0 - alphas[j];
        // log of prod_{j != i} (1 - tail (1 - miss_j)), via the full product
        // divided by agent i's own factor.
        double log_full = 0.0;
        for (double mj : miss) log_full += std::log1p(-tail_high * (1.0 - mj));
        double best = 0.0;
        for (double mi : miss) {
            const double q_i = 1.0 - std::exp(log_full - std::log1p(-tail_high * (1.0 - mi)));
            best = std::max(best, q_i);
        }
        if (best >= 1.0 - delta) return t;
    }
    return t_cap;
}

BenchmarkRevenue benchmark_revenue(const MarketConfig& cfg, int replications,
                                   std::uint64_t seed) {
    cfg.validate();
    if (replications < 1) throw std::domain_error("replications must be at least 1");
    BenchmarkRevenue out;
    out.reserve_low = optimal_reserve(cfg.low).reserve;
    out.reserve_high = optimal_reserve(cfg.high).reserve;
    out.low = single_round_revenue(cfg.low, cfg.alphas, out.reserve_low, replications,
                                   derive_seed(seed, 0));
    out.high = single_round_revenue(cfg.high, cfg.alphas, out.reserve_high, replications,
                                    derive_seed(seed, 1));
    const double w_low = 1.0 - cfg.p_high;
    out.blended_mean = w_low * out.low.mean + cfg.p_high * out.high.mean;
    out.blended_ci = std::sqrt(w_low * w_low * out.low.ci_halfwidth * out.low.ci_halfwidth +
                               cfg.p_high * cfg.p_high * out.high.ci_halfwidth *
                                   out.high.ci_halfwidth);
    return out;
}

TransientExample transient_counterexample(int T, double epsilon_price) {
    if (T < 2) throw std::domain_error("horizon must be at least 2");
    if (!(epsilon_price >= 0.0)) throw std::domain_error("epsilon_price must be nonnegative");
    TransientExample out;
    out.static_revenue = T / 4.0;
    out.advance_charge_revenue = (T - 1) / 2.0 - epsilon_price;
    return out;
}

TheoremParams compute_theorem_params(const MarketConfig& cfg, double rho, double eps,
                                     double tolerance) {
    cfg.validate();
    const double alpha = cfg.alphas.front();
    for (double a : cfg.alphas)
        if (a != alpha)
            throw std::domain_error("scale formulas need a common participation rate");
    TheoremParams out;
    out.eps = eps;
    out.rho = rho;
    out.r_low_star = optimal_reserve(cfg.low, tolerance).reserve;
    out.r_high_star = optimal_reserve(cfg.high, tolerance).reserve;
    out.gap = out.r_high_star - out.r_low_star;
    out.tail_high = 1.0 - cfg.high.cdf(rho);
    out.lambda = 1.0 - cfg.low.cdf(rho);
    if (!(out.tail_high > 0.0))
        throw std::domain_error("rho leaves no mass above it under the high distribution");
    out.delta = eps / out.gap;
    out.thm2 = params_thm2(eps, alpha, cfg.n, out.tail_high, out.r_low_star, out.r_high_star);
    out.thm3 = params_thm3(eps, alpha, cfg.n, out.tail_high, out.lambda, out.r_low_star,
                           out.r_high_star);
    out.thm5 = params_thm5(eps, alpha, cfg.n, out.tail_high, out.lambda, out.r_low_star,
                           out.r_high_star);
    out.t_delta_rounds = t_delta(cfg.n, cfg.alphas, out.tail_high, out.delta, cfg.T);
    return out;
}

}  // namespace dynres
