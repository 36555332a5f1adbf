#include "dynres/theory.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dynres/rng.hpp"
#include "test_util.hpp"

using namespace dynres;

namespace {

MarketConfig example_market_cfg() {
    MarketConfig cfg;
    cfg.n = 20;
    cfg.T = 6800;
    cfg.alphas.assign(20, 0.05);
    cfg.beta = 0.0;
    cfg.p_high = 0.5;
    cfg.low = ValuationDistribution::truncated_normal(1.0, 0.4, 0.0, 3.0);
    cfg.high = ValuationDistribution::normal(3.0, 0.8);
    return cfg;
}

}  // namespace

TEST_CASE("thm2 scale formulas") {
    SUBCASE("limiting value as eps approaches the gap with full tail") {
        const double gap = 1.0;
        auto p = params_thm2(gap * (1.0 - 1e-12), 1.0, 2, 1.0, 1.0, 2.0);
        CHECK(p.n0 == doctest::Approx(2.102104017090).epsilon(1e-9));
        CHECK(p.tau == 2.0);
        CHECK(p.t0 == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("headline market shape") {
        // reserves rounded to the three digits used when quoting the market
        auto p = params_thm2(0.009, 0.05, 20, 0.5, 0.796, 2.318);
        CHECK(p.n0 == doctest::Approx(19.519376).epsilon(1e-6));
        CHECK(p.tau == 20.0);
        CHECK(p.t0 == doctest::Approx(6764.4444).epsilon(1e-6));
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(params_thm2(0.5, 1.0, 1, 0.5, 1.0, 2.0), std::domain_error);
        CHECK_THROWS_AS(params_thm2(0.5, 0.0, 2, 0.5, 1.0, 2.0), std::domain_error);
        CHECK_THROWS_AS(params_thm2(0.5, 1.0, 2, 0.0, 1.0, 2.0), std::domain_error);
        CHECK_THROWS_AS(params_thm2(1.0, 1.0, 2, 0.5, 1.0, 2.0), std::domain_error);
        CHECK_THROWS_AS(params_thm2(0.5, 1.0, 2, 0.5, 2.0, 1.0), std::domain_error);
    }
}

TEST_CASE("thm3 approximation formulas") {
    auto p = params_thm3(0.5, 0.1, 10, 0.5, 0.0, 1.0, 2.0);
    CHECK(p.delta == doctest::Approx(0.5));
    CHECK(p.n1 == doctest::Approx(9.816832).epsilon(1e-6));
    CHECK(std::isinf(p.n2));
    CHECK(p.tau == 10.0);
    CHECK(p.t1 == doctest::Approx(80.0).epsilon(1e-9));

    auto q = params_thm3(0.5, 0.1, 10, 0.5, 0.05, 1.0, 2.0);
    CHECK(q.n2 == doctest::Approx(10.0).epsilon(1e-12));

    // with a shared eps and gap the two market-size floors differ by exactly
    // the 3.18 / 1.59 ratio
    auto t2 = params_thm2(0.5, 0.1, 10, 0.5, 1.0, 2.0);
    CHECK((p.n1 - 1.0) / (t2.n0 - 1.0) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(params_thm3(0.5, 0.1, 10, 0.5, 1.5, 1.0, 2.0), std::domain_error);
}

TEST_CASE("thm5 generalized trigger formulas") {
    SUBCASE("fixed trigger regime") {
        auto p = params_thm5(0.1, 0.05, 60, 0.5, 0.01, 1.0, 2.0);
        CHECK(p.delta == doctest::Approx(0.1));
        CHECK(p.n3 == doctest::Approx(51.807619).epsilon(1e-6));
        CHECK(p.n4 == doctest::Approx(167.761007).epsilon(1e-6));
        CHECK(p.n_bar == doctest::Approx(167.761007).epsilon(1e-6));
        CHECK(p.regime == Thm5Regime::fixed_k);
        CHECK(p.k == doctest::Approx(6.770355).epsilon(1e-6));
        CHECK(p.tau == 18.0);
        CHECK(p.t1 == doctest::Approx(720.0).epsilon(1e-9));
        CHECK(p.hypothesis_ok);
    }
    SUBCASE("linear trigger regime caps the effective market size") {
        auto p = params_thm5(0.1, 0.05, 10000, 0.5, 0.01, 1.0, 2.0);
        CHECK(p.regime == Thm5Regime::linear_k);
        CHECK(p.k == doctest::Approx(400.0).epsilon(1e-9));
        CHECK(p.tau == 7.0);
        CHECK(p.t1 == doctest::Approx(280.0).epsilon(1e-9));
    }
    SUBCASE("below range") {
        auto p = params_thm5(0.1, 0.05, 30, 0.5, 0.01, 1.0, 2.0);
        CHECK(p.regime == Thm5Regime::below_range);
        CHECK(p.k == 0.0);
    }
    SUBCASE("hypothesis flag") {
        auto p = params_thm5(0.1, 0.05, 60, 0.5, 0.2, 1.0, 2.0);
        CHECK_FALSE(p.hypothesis_ok);
    }
}

TEST_CASE("binomial upper tail") {
    SUBCASE("matches a direct summation") {
        const int m = 10;
        const double p = 0.3;
        // Pascal triangle row, exact in double for m = 10.
        double comb[11];
        comb[0] = 1.0;
        for (int j = 1; j <= m; ++j) comb[j] = comb[j - 1] * (m - j + 1) / j;
        for (int k = 0; k <= m + 1; ++k) {
            double direct = 0.0;
            for (int j = k; j <= m; ++j)
                direct += comb[j] * std::pow(p, j) * std::pow(1.0 - p, m - j);
            CHECK(binomial_tail_geq(m, p, k) == doctest::Approx(direct).epsilon(1e-12));
        }
        CHECK(binomial_tail_geq(m, p, 4) == doctest::Approx(0.350389281600).epsilon(1e-10));
    }
    SUBCASE("edges") {
        CHECK(binomial_tail_geq(5, 0.3, 0) == 1.0);
        CHECK(binomial_tail_geq(5, 0.3, 6) == 0.0);
        CHECK(binomial_tail_geq(5, 0.0, 1) == 0.0);
        CHECK(binomial_tail_geq(5, 1.0, 5) == 1.0);
        CHECK_THROWS_AS(binomial_tail_geq(-1, 0.3, 1), std::domain_error);
        CHECK_THROWS_AS(binomial_tail_geq(5, 1.2, 1), std::domain_error);
    }
    SUBCASE("large count stays stable") {
        CHECK(binomial_tail_geq(10000, 1e-4, 1) ==
              doctest::Approx(0.632138953567).epsilon(1e-9));
    }
    SUBCASE("monotone in the threshold") {
        double prev = 1.1;
        for (int k = 0; k <= 30; ++k) {
            double v = binomial_tail_geq(30, 0.4, k);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("high bidder probability") {
    SUBCASE("single opposing agent, guaranteed participation") {
        auto hb = high_bidder_probability(2, 1.0, 1, 0.5, 1, true, 0.5, 1.59);
        CHECK(hb.exact == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(hb.chernoff_bound == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("thin participation hand value") {
        auto hb = high_bidder_probability(20, 0.05, 20, 0.5, 1, true, 0.1, 1.59);
        const double p = (1.0 - std::pow(0.95, 20)) * 0.5;
        CHECK(hb.exact == doctest::Approx(1.0 - std::pow(1.0 - p, 19)).epsilon(1e-12));
        CHECK(hb.exact == doctest::Approx(0.999356604845).epsilon(1e-9));
    }
    SUBCASE("bound divisor switches at k = 2") {
        auto one = high_bidder_probability(10, 0.5, 3, 0.5, 1, true, 0.5, 4.24);
        auto two = high_bidder_probability(10, 0.5, 3, 0.5, 2, true, 0.5, 4.24);
        CHECK(one.chernoff_bound == doctest::Approx(std::pow(0.25, 4.24 / 1.59)));
        CHECK(two.chernoff_bound == doctest::Approx(0.25));
    }
    SUBCASE("include or exclude the fixed agent") {
        auto incl = high_bidder_probability(2, 1.0, 1, 0.5, 2, false, 0.5, 4.24);
        CHECK(incl.exact == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(high_bidder_probability(0, 0.5, 1, 0.5, 1, true, 0.5, 1.59),
                        std::domain_error);
        CHECK_THROWS_AS(high_bidder_probability(2, 0.5, 0, 0.5, 1, true, 0.5, 1.59),
                        std::domain_error);
        CHECK_THROWS_AS(high_bidder_probability(2, 0.5, 1, 0.5, 0, true, 0.5, 1.59),
                        std::domain_error);
        CHECK_THROWS_AS(high_bidder_probability(2, 0.5, 1, 0.5, 1, true, 1.0, 1.59),
                        std::domain_error);
    }
}

TEST_CASE("failure probability dominance sweep") {
    // Random points satisfying the scale-lemma preconditions. For a single
    // required high bidder the bound holds over the whole precondition
    // region; for k >= 2 it holds with margin while k stays at or below half
    // its cap floor(C log(2/delta) / 3.18), which covers how the theorems
    // deploy it away from the cap. At the cap itself the stated constant
    // fails; the corner case below pins that.
    std::mt19937_64 eng(derive_seed(20260816, 77));
    auto unif = [&](double lo, double hi) { return lo + (hi - lo) * u01(eng); };
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        const bool single = i % 2 == 0;
        const double delta = std::exp(unif(std::log(single ? 0.5 : 0.25), std::log(0.02)));
        const double c_const = single ? (i % 4 < 2 ? 1.59 : 3.18) : unif(3.18, 8.48);
        const double tail = unif(0.15, 1.0);
        const double alpha = unif(0.02, 1.0);
        const double log_term = std::log(2.0 / delta);
        const double n0 = 1.0 + c_const * log_term / tail;
        const int n = static_cast<int>(std::ceil(n0 * unif(1.0, 5.0)));
        const int tau = static_cast<int>(std::ceil((n0 - 1.0) / ((n - 1) * alpha)));
        int k = 1;
        if (!single) {
            const int cap = static_cast<int>(std::floor(c_const * log_term / 3.18));
            if (cap < 2) continue;
            k = 2 + static_cast<int>(u01(eng) * (std::max(2, cap / 2) - 1));
        }
        auto hb = high_bidder_probability(n, alpha, tau, tail, k, true, delta, c_const);
        CHECK(1.0 - hb.exact <= hb.chernoff_bound);
        ++checked;
    }
    CHECK(checked >= 35);
}

TEST_CASE("stated bound overreaches at the trigger cap") {
    // delta = 0.02, tail = 0.3, alpha = 0.05, C = 8.48 puts the minimum
    // market at n = 132 with tau = 20 and a trigger of k = 11, right at the
    // precondition cap. The exact miss probability is 1.7485e-4, above the
    // stated (delta/2)^(C/4.24) = 1e-4. The tail argument behind that
    // formula only supports a 12.72 divisor (k at half the mean costs
    // mu/8 in the exponent), and the exact value does sit below that
    // weaker curve. Callers should treat the 4.24 form as aggressive when
    // k is pushed to its cap.
    auto hb = high_bidder_probability(132, 0.05, 20, 0.3, 11, true, 0.02, 8.48);
    const double fail = 1.0 - hb.exact;
    CHECK(fail == doctest::Approx(1.7485098735e-4).epsilon(1e-6));
    CHECK(fail > hb.chernoff_bound);
    CHECK(fail < std::pow(0.01, 8.48 / 12.72));
}

TEST_CASE("detection time") {
    SUBCASE("hand cases") {
        CHECK(t_delta(5, std::vector<double>(5, 1.0), 0.5, 0.1, 50) == 1);
        CHECK(t_delta(2, std::vector<double>(2, 1.0), 0.5, 0.25, 100) == 100);
        CHECK(t_delta(4, std::vector<double>(4, 0.2), 0.6, 0.2, 1000) == 6);
    }
    SUBCASE("max over agents uses the others' rates") {
        // the rarely showing agent is the one who can be most confident,
        // because the two frequent agents are both on the other side
        std::vector<double> alphas{1.0, 0.01, 0.01};
        CHECK(t_delta(3, alphas, 1.0, 0.3, 100) == 1);
    }
    SUBCASE("weakly earlier when delta loosens") {
        std::vector<double> alphas(6, 0.15);
        int prev = 10000;
        for (double delta : {0.05, 0.1, 0.2, 0.4}) {
            int t = t_delta(6, alphas, 0.4, delta, 10000);
            CHECK(t <= prev);
            prev = t;
        }
    }
    SUBCASE("bounded by the thm3 wait whenever the market clears the floor") {
        for (double delta : {0.5, 0.2, 0.05}) {
            for (double tail : {0.3, 0.6, 0.95}) {
                for (double alpha : {0.05, 0.4, 1.0}) {
                    const double n1 = 1.0 + 3.18 * std::log(2.0 / delta) / tail;
                    for (int mult : {1, 2}) {
                        const int n = static_cast<int>(std::ceil(n1)) * mult;
                        const int tau =
                            static_cast<int>(std::ceil((n1 - 1.0) / ((n - 1) * alpha)));
                        const int t = t_delta(n, std::vector<double>(n, alpha), tail, delta,
                                              tau * 10 + 10);
                        CHECK(t <= tau);
                    }
                }
            }
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(t_delta(2, {1.0}, 0.5, 0.1, 10), std::domain_error);
        CHECK_THROWS_AS(t_delta(2, {1.0, 0.0}, 0.5, 0.1, 10), std::domain_error);
        CHECK_THROWS_AS(t_delta(2, {1.0, 1.0}, 0.5, 1.5, 10), std::domain_error);
    }
}

TEST_CASE("known type benchmark on symmetric uniforms") {
    MarketConfig cfg;
    cfg.n = 2;
    cfg.T = 10;
    cfg.alphas = {1.0, 1.0};
    cfg.beta = 0.0;
    cfg.p_high = 0.5;
    cfg.low = ValuationDistribution::uniform(0.0, 1.0);
    cfg.high = ValuationDistribution::uniform(0.0, 1.0);
    auto b = benchmark_revenue(cfg, 40000, 99);
    CHECK(b.reserve_low == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(b.reserve_high == doctest::Approx(0.5).epsilon(1e-9));
    // both sides are the same market, so the blend is the one-round optimum
    CHECK(std::abs(b.blended_mean - 5.0 / 12.0) <= b.blended_ci + 0.003);
    CHECK(b.blended_ci < 0.01);
}

TEST_CASE("transient single buyer example") {
    auto t = transient_counterexample(100, 0.01);
    CHECK(t.static_revenue == 25.0);
    CHECK(t.advance_charge_revenue == 49.49);
    CHECK(t.advance_charge_revenue > t.static_revenue);
    auto edge = transient_counterexample(2, 0.0);
    CHECK(edge.static_revenue == 0.5);
    CHECK(edge.advance_charge_revenue == 0.5);
    CHECK_THROWS_AS(transient_counterexample(1, 0.01), std::domain_error);
    CHECK_THROWS_AS(transient_counterexample(100, -0.1), std::domain_error);
}

TEST_CASE("combined parameter bundle on the headline market") {
    auto cfg = example_market_cfg();
    auto tp = compute_theorem_params(cfg, 3.0, 0.009);
    CHECK(tp.r_low_star == doctest::Approx(0.796).epsilon(2e-3));
    CHECK(tp.r_high_star == doctest::Approx(2.318).epsilon(1e-3));
    CHECK(tp.tail_high == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tp.lambda == doctest::Approx(0.0));  // low support tops out at rho
    CHECK(tp.thm2.n0 == doctest::Approx(19.52).epsilon(5e-4));
    CHECK(tp.thm2.tau == 20.0);
    CHECK(tp.thm2.t0 > 6750.0);
    CHECK(tp.thm2.t0 < 6780.0);
    CHECK(std::isinf(tp.thm3.n2));
    CHECK(tp.t_delta_rounds == 13);

    SUBCASE("needs one shared participation rate") {
        cfg.alphas[3] = 0.06;
        CHECK_THROWS_AS(compute_theorem_params(cfg, 3.0, 0.009), std::domain_error);
    }
    SUBCASE("rejects a trigger with no high mass above it") {
        cfg.high = ValuationDistribution::uniform(0.0, 2.0);
        CHECK_THROWS_AS(compute_theorem_params(cfg, 3.0, 0.009), std::domain_error);
    }
    SUBCASE("rejects eps outside the gap") {
        CHECK_THROWS_AS(compute_theorem_params(cfg, 3.0, 2.0), std::domain_error);
    }
}
