#ifndef DYNRES_DISTRIBUTIONS_HPP
#define DYNRES_DISTRIBUTIONS_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynres/rng.hpp"

namespace dynres {

// Standard normal CDF and its inverse. The inverse is a rational
// approximation polished with two Newton steps, accurate to ~1e-15 for
// p in (1e-300, 1 - 1e-16).
double normal_cdf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

enum class DistKind { uniform, normal, truncated_normal, exponential, tabulated };

struct Support {
    double lo;
    double hi;
};

// Immutable valuation distribution. Sampling is inverse-CDF throughout:
// one uniform draw in, one valuation out. No rejection loops, so paired
// simulations consume identical generator streams.
class ValuationDistribution {
  public:
    static ValuationDistribution uniform(double lo, double hi);
    static ValuationDistribution normal(double mu, double sigma);
    static ValuationDistribution truncated_normal(double mu, double sigma, double lo, double hi);
    static ValuationDistribution exponential(double rate);
    // values strictly increasing, cdf from 0 to 1 nondecreasing; the CDF is
    // interpolated linearly between knots and the pdf comes from central
    // differences of that interpolant.
    static ValuationDistribution tabulated(std::vector<double> values, std::vector<double> cdf);

    DistKind kind() const { return kind_; }
    Support support() const { return support_; }

    double pdf(double v) const;
    double cdf(double v) const;
    double quantile(double u) const;
    double sample(std::mt19937_64& eng) const { return quantile(u01(eng)); }
    double mean() const;

    // Parameters, exposed for serialization. Meaning depends on kind.
    double param_a() const { return a_; }  // lo / mu / rate
    double param_b() const { return b_; }  // hi / sigma
    const std::vector<double>& table_values() const { return xs_; }
    const std::vector<double>& table_cdf() const { return fs_; }

    std::string describe() const;

  private:
    ValuationDistribution() = default;

    DistKind kind_{DistKind::uniform};
    Support support_{0.0, 1.0};
    double a_{0.0};
    double b_{1.0};
    // truncated normal cache
    double phi_lo_{0.0};
    double phi_hi_{1.0};
    double mass_{1.0};
    // tabulated knots
    std::vector<double> xs_;
    std::vector<double> fs_;
};

// v - (1 - F(v)) / f(v). Throws std::domain_error outside the support or
// where the density vanishes.
double virtual_value(const ValuationDistribution& d, double v);

// True iff the virtual value is strictly increasing (and the density
// positive) across a grid of `grid_size` interior points. Unbounded support
// ends are cut at the 1e-12 / 1 - 1e-12 quantiles before gridding.
bool check_regularity(const ValuationDistribution& d, int grid_size = 1000);

struct ReserveSolution {
    double reserve;
    double residual;   // virtual value at the returned reserve
    int iterations;
};

// Root of the virtual value by bisection. Requires a regular distribution
// (throws std::domain_error otherwise). If the virtual value is already
// positive at the lower support end the reserve clamps there. Throws
// SolverFailure when no positive-virtual-value bracket is found after 64
// geometric expansions above the mean.
ReserveSolution optimal_reserve(const ValuationDistribution& d, double tolerance = 1e-9);

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RevenueEstimate {
    double mean;
    double ci_halfwidth;  // 1.96 * standard error
};

// Monte Carlo mean revenue of one second-price round with reserve: n agents,
// each present independently with probability alpha, valuations iid from d.
// Winner pays max(second highest present bid, reserve).
RevenueEstimate single_round_revenue(const ValuationDistribution& d, int n, double alpha,
                                     double reserve, int replications, std::uint64_t seed);

// Same, with one participation probability per agent.
RevenueEstimate single_round_revenue(const ValuationDistribution& d,
                                     const std::vector<double>& alphas, double reserve,
                                     int replications, std::uint64_t seed);

}  // namespace dynres

#endif
