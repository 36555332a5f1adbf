#include "dynres/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dynres {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sqr(double x) { return x * x; }

}  // namespace

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * M_SQRT1_2);
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("normal_quantile: p must lie strictly in (0,1)");
    }
    // Acklam's rational approximation, then two Newton corrections.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        double density = normal_pdf(x);
        if (density <= 0.0) break;
        x -= (normal_cdf(x) - p) / density;
    }
    return x;
}

ValuationDistribution ValuationDistribution::uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform: need lo < hi");
    ValuationDistribution d;
    d.kind_ = DistKind::uniform;
    d.support_ = {lo, hi};
    d.a_ = lo;
    d.b_ = hi;
    return d;
}

ValuationDistribution ValuationDistribution::normal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("normal: need sigma > 0");
    ValuationDistribution d;
    d.kind_ = DistKind::normal;
    d.support_ = {-kInf, kInf};
    d.a_ = mu;
    d.b_ = sigma;
    return d;
}

ValuationDistribution ValuationDistribution::truncated_normal(double mu, double sigma, double lo,
                                                              double hi) {
    if (!(sigma > 0.0)) throw std::invalid_argument("truncated_normal: need sigma > 0");
    if (!(lo < hi)) throw std::invalid_argument("truncated_normal: need lo < hi");
    ValuationDistribution d;
    d.kind_ = DistKind::truncated_normal;
    d.support_ = {lo, hi};
    d.a_ = mu;
    d.b_ = sigma;
    d.phi_lo_ = std::isinf(lo) ? 0.0 : normal_cdf((lo - mu) / sigma);
    d.phi_hi_ = std::isinf(hi) ? 1.0 : normal_cdf((hi - mu) / sigma);
    d.mass_ = d.phi_hi_ - d.phi_lo_;
    if (!(d.mass_ > 0.0)) throw std::invalid_argument("truncated_normal: truncation mass is zero");
    return d;
}

ValuationDistribution ValuationDistribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: need rate > 0");
    ValuationDistribution d;
    d.kind_ = DistKind::exponential;
    d.support_ = {0.0, kInf};
    d.a_ = rate;
    return d;
}

ValuationDistribution ValuationDistribution::tabulated(std::vector<double> values,
                                                       std::vector<double> cdf) {
    if (values.size() != cdf.size() || values.size() < 2) {
        throw std::invalid_argument("tabulated: need matching value/cdf tables with >= 2 rows");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw std::invalid_argument("tabulated: values must be strictly increasing");
        }
        if (cdf[i] < cdf[i - 1]) {
            throw std::invalid_argument("tabulated: cdf must be nondecreasing");
        }
    }
    if (std::abs(cdf.front()) > 1e-12 || std::abs(cdf.back() - 1.0) > 1e-12) {
        throw std::invalid_argument("tabulated: cdf must run from 0 to 1");
    }
    cdf.front() = 0.0;
    cdf.back() = 1.0;
    ValuationDistribution d;
    d.kind_ = DistKind::tabulated;
    d.support_ = {values.front(), values.back()};
    d.xs_ = std::move(values);
    d.fs_ = std::move(cdf);
    return d;
}

double ValuationDistribution::cdf(double v) const {
    switch (kind_) {
        case DistKind::uniform:
            if (v <= a_) return 0.0;
            if (v >= b_) return 1.0;
            return (v - a_) / (b_ - a_);
        case DistKind::normal:
            return normal_cdf((v - a_) / b_);
        case DistKind::truncated_normal:
            if (v <= support_.lo) return 0.0;
            if (v >= support_.hi) return 1.0;
            return (normal_cdf((v - a_) / b_) - phi_lo_) / mass_;
        case DistKind::exponential:
            if (v <= 0.0) return 0.0;
            return -std::expm1(-a_ * v);
        case DistKind::tabulated: {
            if (v <= xs_.front()) return 0.0;
            if (v >= xs_.back()) return 1.0;
            auto it = std::upper_bound(xs_.begin(), xs_.end(), v);
            std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
            double w = (v - xs_[j]) / (xs_[j + 1] - xs_[j]);
            return fs_[j] + w * (fs_[j + 1] - fs_[j]);
        }
    }
    return 0.0;
}

double ValuationDistribution::pdf(double v) const {
    switch (kind_) {
        case DistKind::uniform:
            return (v < a_ || v > b_) ? 0.0 : 1.0 / (b_ - a_);
        case DistKind::normal:
            return normal_pdf((v - a_) / b_) / b_;
        case DistKind::truncated_normal:
            if (v < support_.lo || v > support_.hi) return 0.0;
            return normal_pdf((v - a_) / b_) / (b_ * mass_);
        case DistKind::exponential:
            return v < 0.0 ? 0.0 : a_ * std::exp(-a_ * v);
        case DistKind::tabulated: {
            if (v < xs_.front() || v > xs_.back()) return 0.0;
            double h = (xs_.back() - xs_.front()) * 1e-7;
            double up = cdf(std::min(v + h, xs_.back()));
            double dn = cdf(std::max(v - h, xs_.front()));
            double width = std::min(v + h, xs_.back()) - std::max(v - h, xs_.front());
            return width > 0.0 ? (up - dn) / width : 0.0;
        }
    }
    return 0.0;
}

double ValuationDistribution::quantile(double u) const {
    if (u < 0.0 || u > 1.0) throw std::domain_error("quantile: u must lie in [0,1]");
    switch (kind_) {
        case DistKind::uniform:
            return a_ + u * (b_ - a_);
        case DistKind::normal:
            if (u <= 0.0 || u >= 1.0) {
                throw std::domain_error("quantile: unbounded support, u must be interior");
            }
            return a_ + b_ * normal_quantile(u);
        case DistKind::truncated_normal: {
            if (u <= 0.0) return support_.lo;
            if (u >= 1.0) return support_.hi;
            // rescale into the kept slice of the parent normal
            double p = phi_lo_ + u * mass_;
            double v = a_ + b_ * normal_quantile(p);
            return std::clamp(v, support_.lo, support_.hi);
        }
        case DistKind::exponential:
            if (u >= 1.0) throw std::domain_error("quantile: unbounded support, u must be < 1");
            return -std::log1p(-u) / a_;
        case DistKind::tabulated: {
            if (u <= 0.0) return xs_.front();
            if (u >= 1.0) return xs_.back();
            // leftmost knot pair with fs_[j] <= u <= fs_[j+1]
            auto it = std::upper_bound(fs_.begin(), fs_.end(), u);
            std::size_t j = static_cast<std::size_t>(it - fs_.begin());
            j = (j == 0) ? 0 : j - 1;
            while (j + 2 < fs_.size() && fs_[j + 1] < u) ++j;
            double df = fs_[j + 1] - fs_[j];
            if (df <= 0.0) return xs_[j + 1];
            double w = (u - fs_[j]) / df;
            return xs_[j] + w * (xs_[j + 1] - xs_[j]);
        }
    }
    return 0.0;
}

double ValuationDistribution::mean() const {
    switch (kind_) {
        case DistKind::uniform:
            return 0.5 * (a_ + b_);
        case DistKind::normal:
            return a_;
        case DistKind::truncated_normal: {
            double za = std::isinf(support_.lo) ? 0.0 : normal_pdf((support_.lo - a_) / b_);
            double zb = std::isinf(support_.hi) ? 0.0 : normal_pdf((support_.hi - a_) / b_);
            return a_ + b_ * (za - zb) / mass_;
        }
        case DistKind::exponential:
            return 1.0 / a_;
        case DistKind::tabulated: {
            double m = 0.0;
            for (std::size_t j = 0; j + 1 < xs_.size(); ++j) {
                m += (fs_[j + 1] - fs_[j]) * 0.5 * (xs_[j] + xs_[j + 1]);
            }
            return m;
        }
    }
    return 0.0;
}

std::string ValuationDistribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DistKind::uniform: os << "uniform[" << a_ << "," << b_ << "]"; break;
        case DistKind::normal: os << "normal(" << a_ << "," << b_ << ")"; break;
        case DistKind::truncated_normal:
            os << "truncated-normal(" << a_ << "," << b_ << ")[" << support_.lo << ","
               << support_.hi << "]";
            break;
        case DistKind::exponential: os << "exponential(" << a_ << ")"; break;
        case DistKind::tabulated: os << "tabulated(" << xs_.size() << " knots)"; break;
    }
    return os.str();
}

double virtual_value(const ValuationDistribution& d, double v) {
    Support s = d.support();
    if (v < s.lo || v > s.hi) throw std::domain_error("virtual_value: v outside support");
    double f = d.pdf(v);
    if (!(f > 0.0)) throw std::domain_error("virtual_value: density vanishes at v");
    return v - (1.0 - d.cdf(v)) / f;
}

namespace {

// Grid endpoints for regularity scans and plots: unbounded ends are cut at
// extreme quantiles so every grid point is a real number.
std::pair<double, double> grid_bounds(const ValuationDistribution& d) {
    Support s = d.support();
    double lo = std::isinf(s.lo) ? d.quantile(1e-12) : s.lo;
    double hi = std::isinf(s.hi) ? d.quantile(1.0 - 1e-12) : s.hi;
    return {lo, hi};
}

}  // namespace

bool check_regularity(const ValuationDistribution& d, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("check_regularity: grid_size must be >= 2");
    auto [lo, hi] = grid_bounds(d);
    double step = (hi - lo) / grid_size;
    double prev = -kInf;
    for (int i = 0; i < grid_size; ++i) {
        // midpoints keep the scan off support endpoints where densities of
        // bounded kinds may legitimately vanish
        double v = lo + (i + 0.5) * step;
        if (!(d.pdf(v) > 0.0)) return false;
        double phi = v - (1.0 - d.cdf(v)) / d.pdf(v);
        if (!std::isfinite(phi) || phi <= prev) return false;
        prev = phi;
    }
    return true;
}

ReserveSolution optimal_reserve(const ValuationDistribution& d, double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("optimal_reserve: tolerance must be > 0");
    if (!check_regularity(d)) {
        throw std::domain_error("optimal_reserve: distribution fails the regularity check");
    }
    auto [lo, hi] = grid_bounds(d);
    auto phi = [&](double v) { return virtual_value(d, v); };

    double a = lo;
    double fa = phi(a);
    if (fa >= 0.0) {
        // every sale is profitable; reserve sits at the bottom of the support
        return {a, fa, 0};
    }
    double b = std::max(d.mean(), a + 1e-6 * std::max(1.0, std::abs(a)));
    b = std::min(b, hi);
    double fb = phi(b);
    int expansions = 0;
    while (fb <= 0.0) {
        if (b >= hi) {
            // bounded support: the virtual value at the top equals the top
            b = hi;
            break;
        }
        if (++expansions > 64) {
            throw SolverFailure("optimal_reserve: no sign change after 64 bracket expansions");
        }
        b = std::min(a + 2.0 * (b - a), hi);
        fb = phi(b);
    }

    double mid = 0.5 * (a + b);
    double fm = phi(mid);
    int iters = 0;
    while (std::abs(fm) > tolerance && (b - a) > 1e-15 * std::max(1.0, std::abs(b)) &&
           iters < 200) {
        if (fm > 0.0) {
            b = mid;
        } else {
            a = mid;
        }
        mid = 0.5 * (a + b);
        fm = phi(mid);
        ++iters;
    }
    return {mid, fm, iters};
}

RevenueEstimate single_round_revenue(const ValuationDistribution& d,
                                     const std::vector<double>& alphas, double reserve,
                                     int replications, std::uint64_t seed) {
    if (replications < 2) throw std::invalid_argument("single_round_revenue: need >= 2 replications");
    for (double a : alphas) {
        if (a < 0.0 || a > 1.0) {
            throw std::invalid_argument("single_round_revenue: alpha outside [0,1]");
        }
    }
    double sum = 0.0;
    double sumsq = 0.0;
    for (int r = 0; r < replications; ++r) {
        std::mt19937_64 eng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        double best = -kInf;
        double second = -kInf;
        for (double a : alphas) {
            bool present = bernoulli(eng, a);
            if (!present) continue;
            double v = d.sample(eng);
            if (v > best) {
                second = best;
                best = v;
            } else if (v > second) {
                second = v;
            }
        }
        double rev = 0.0;
        if (best >= reserve) rev = std::max(second, reserve);
        sum += rev;
        sumsq += rev * rev;
    }
    double m = sum / replications;
    double var = std::max(0.0, (sumsq - replications * m * m) / (replications - 1));
    double ci = 1.96 * std::sqrt(var / replications);
    return {m, ci};
}

RevenueEstimate single_round_revenue(const ValuationDistribution& d, int n, double alpha,
                                     double reserve, int replications, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("single_round_revenue: need n >= 1");
    return single_round_revenue(d, std::vector<double>(static_cast<std::size_t>(n), alpha),
                                reserve, replications, seed);
}

}  // namespace dynres
