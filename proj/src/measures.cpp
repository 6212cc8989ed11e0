#include "critpairs/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "critpairs/quadrature.hpp"

namespace critpairs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kCdfCheckpoints = 1024;
constexpr std::size_t kAngularCells = 32768;

} // namespace

RadialMeasure RadialMeasure::power_law(double alpha, double eps) {
    if (alpha <= -1.0) throw std::invalid_argument("RadialMeasure: alpha must exceed -1");
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("RadialMeasure: eps outside (0,1]");
    RadialMeasure mu;
    mu.alpha_ = alpha;
    mu.model_ = RadialModel::kPowerLaw;
    mu.c_mu_ = mu.C_mu_ = alpha + 1.0;
    mu.eps_ = eps;
    return mu;
}

RadialMeasure RadialMeasure::custom(double alpha, CustomRadial spec) {
    if (alpha <= -1.0) throw std::invalid_argument("RadialMeasure: alpha must exceed -1");
    if (!spec.density) throw std::invalid_argument("RadialMeasure: custom model needs a density");
    if (spec.c_mu <= 0.0 || spec.C_mu <= 0.0 || spec.eps <= 0.0 || spec.eps > 1.0)
        throw std::invalid_argument("RadialMeasure: invalid pinch constants");
    RadialMeasure mu;
    mu.alpha_ = alpha;
    mu.model_ = RadialModel::kCustom;
    mu.c_mu_ = spec.c_mu;
    mu.C_mu_ = spec.C_mu;
    mu.eps_ = spec.eps;
    mu.custom_ = std::move(spec);

    // Checkpointed CDF; individual queries refine from the nearest checkpoint.
    mu.grid_r_.resize(kCdfCheckpoints + 1);
    mu.grid_cum_.resize(kCdfCheckpoints + 1);
    mu.grid_cum_[0] = 0.0;
    for (std::size_t k = 0; k <= kCdfCheckpoints; ++k)
        mu.grid_r_[k] = static_cast<double>(k) / kCdfCheckpoints;
    for (std::size_t k = 1; k <= kCdfCheckpoints; ++k) {
        const double inc = integrate(mu.custom_.density, mu.grid_r_[k - 1], mu.grid_r_[k], 1e-14);
        mu.grid_cum_[k] = mu.grid_cum_[k - 1] + inc;
    }
    const double total = mu.grid_cum_.back();
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("RadialMeasure: custom density does not integrate to 1");
    for (auto& c : mu.grid_cum_) c /= total;
    return mu;
}

double RadialMeasure::radial_density(double r) const {
    if (r < 0.0 || r >= 1.0) return 0.0;
    if (model_ == RadialModel::kPowerLaw)
        return (alpha_ + 1.0) * std::pow(1.0 - r, alpha_);
    return custom_.density(r);
}

double RadialMeasure::edge_density_limit() const {
    if (model_ == RadialModel::kPowerLaw) return alpha_ + 1.0;
    // Numerical limit of f_R(r)/(1-r)^alpha; reject if it has not settled.
    const double a = custom_.density(1.0 - 1e-6) * std::pow(1e-6, -alpha_);
    const double b = custom_.density(1.0 - 1e-8) * std::pow(1e-8, -alpha_);
    if (!(std::isfinite(b)) || std::abs(a - b) > 1e-3 * std::max(std::abs(b), 1.0))
        throw std::domain_error("RadialMeasure: edge density limit does not exist");
    return b;
}

double RadialMeasure::cdf(double r) const {
    if (r < 0.0 || r > 1.0) throw std::domain_error("radial_cdf: r outside [0,1]");
    if (model_ == RadialModel::kPowerLaw)
        return r >= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - r, alpha_ + 1.0);
    if (r >= 1.0) return 1.0;
    const std::size_t k = std::min<std::size_t>(
        static_cast<std::size_t>(r * kCdfCheckpoints), kCdfCheckpoints - 1);
    const double f = grid_cum_[k] + integrate(custom_.density, grid_r_[k], r, 1e-14);
    return std::clamp(f, 0.0, 1.0);
}

double RadialMeasure::quantile(double u) const {
    if (u < 0.0 || u >= 1.0) throw std::domain_error("radial_quantile: u outside [0,1)");
    if (model_ == RadialModel::kPowerLaw)
        return 1.0 - std::pow(1.0 - u, 1.0 / (alpha_ + 1.0));
    if (custom_.quantile) return custom_.quantile(u);
    // Bisection on the cached CDF; slow but only a fallback path.
    const auto it = std::lower_bound(grid_cum_.begin(), grid_cum_.end(), u);
    std::size_t hi_idx = static_cast<std::size_t>(it - grid_cum_.begin());
    double lo = hi_idx == 0 ? 0.0 : grid_r_[hi_idx - 1];
    double hi = hi_idx >= grid_r_.size() ? 1.0 : grid_r_[hi_idx];
    for (int iter = 0; iter < 64 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double radial_cdf(const RadialMeasure& mu, double r) { return mu.cdf(r); }
double radial_quantile(const RadialMeasure& mu, double u) { return mu.quantile(u); }

double RadialMeasure::sample_radius(RngStream& stream) const {
    if (model_ == RadialModel::kPowerLaw || custom_.quantile)
        return quantile(stream.uniform01());
    if (custom_.density_bound > 0.0) {
        // Rejection fallback for bounded custom densities without a quantile.
        for (int attempts = 0; attempts < 100000; ++attempts) {
            const double r = stream.uniform01();
            if (stream.uniform01() * custom_.density_bound <= custom_.density(r)) return r;
        }
        throw std::runtime_error("sample_radius: rejection sampling stalled");
    }
    return quantile(stream.uniform01());  // numeric inversion, slow path
}

RootSample sample_roots(const RadialMeasure& mu, std::size_t n, RngStream& stream) {
    if (n < 2) throw std::invalid_argument("sample_roots: n must be at least 2");
    RootSample sample;
    sample.n = n;
    sample.seed = stream.key();
    sample.alpha = mu.alpha();
    sample.roots.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = mu.sample_radius(stream);
        const double theta = kPi * (1.0 - 2.0 * stream.uniform01());  // (-pi, pi]
        sample.roots[i] = std::polar(r, theta);
    }
    return sample;
}

cplx stieltjes(const RadialMeasure& mu, cplx z) {
    if (z == cplx(0.0, 0.0)) return {0.0, 0.0};
    const double r = std::abs(z);
    const double f = r >= 1.0 ? 1.0 : mu.cdf(r);
    return f / z;
}

double TailLaw::angular_cdf(double theta) const {
    if (theta <= theta_.front()) return 0.0;
    if (theta >= theta_.back()) return 1.0;
    const auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
    const std::size_t k = static_cast<std::size_t>(it - theta_.begin()) - 1;
    const double w = (theta - theta_[k]) / (theta_[k + 1] - theta_[k]);
    return cum_[k] + w * (cum_[k + 1] - cum_[k]);
}

double TailLaw::angular_quantile(double u) const {
    if (u < 0.0 || u > 1.0) throw std::domain_error("angular_quantile: u outside [0,1]");
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    if (k == 0) return theta_.front();
    if (k >= cum_.size()) return theta_.back();
    const double span = cum_[k] - cum_[k - 1];
    const double w = span > 0.0 ? (u - cum_[k - 1]) / span : 0.0;
    return theta_[k - 1] + w * (theta_[k] - theta_[k - 1]);
}

namespace {

// int_{a}^{b} cos^alpha(theta) dtheta for 0 <= a <= b <= pi/2.  The
// substitution theta = pi/2 - s^m with m >= 2/(alpha+1) turns the endpoint
// singularity into a C^1 integrand m s^{m-1} sin^alpha(s^m).
double cos_pow_integral_half(double alpha, double a, double b) {
    if (b <= a) return 0.0;
    const double m = std::max(2.0, std::ceil(2.0 / (alpha + 1.0)) + 1.0);
    const double sa = std::pow(kPi / 2.0 - b, 1.0 / m);
    const double sb = std::pow(kPi / 2.0 - a, 1.0 / m);
    return integrate(
        [alpha, m](double s) {
            const double theta_gap = std::pow(s, m);
            return m * std::pow(s, m - 1.0) * std::pow(std::sin(theta_gap), alpha);
        },
        sa, sb, 1e-13);
}

// General cell on [-pi/2, pi/2], using that cos^alpha is even.
double cos_pow_integral(double alpha, double a, double b) {
    if (b <= a) return 0.0;
    if (a < 0.0 && b > 0.0)
        return cos_pow_integral_half(alpha, 0.0, -a) + cos_pow_integral_half(alpha, 0.0, b);
    if (b <= 0.0) return cos_pow_integral_half(alpha, -b, -a);
    return cos_pow_integral_half(alpha, a, b);
}

} // namespace

TailLaw tail_law(const RadialMeasure& mu) {
    const double alpha = mu.alpha();
    if (alpha >= 1e-12 || alpha <= -1.0)
        throw std::domain_error("tail_law: requires -1 < alpha <= 0");
    const double c_edge = mu.edge_density_limit();

    TailLaw law;
    law.index_ = 2.0 + alpha;

    // Cumulative table of cos^alpha on a grid clustered at +-pi/2.
    law.theta_.resize(kAngularCells + 1);
    law.cum_.resize(kAngularCells + 1);
    for (std::size_t j = 0; j <= kAngularCells; ++j) {
        const double t = -1.0 + 2.0 * static_cast<double>(j) / kAngularCells;
        law.theta_[j] = 0.5 * kPi * std::sin(0.5 * kPi * t);
    }
    law.cum_[0] = 0.0;
    for (std::size_t j = 1; j <= kAngularCells; ++j)
        law.cum_[j] = law.cum_[j - 1] +
                      cos_pow_integral(alpha, law.theta_[j - 1], law.theta_[j]);

    const double total = law.cum_.back();
    law.constant_ = c_edge / (2.0 * kPi * (alpha + 2.0)) * total;
    for (auto& c : law.cum_) c /= total;
    law.cum_.front() = 0.0;
    law.cum_.back() = 1.0;
    return law;
}

} // namespace critpairs
