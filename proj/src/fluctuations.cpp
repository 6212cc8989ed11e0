#include "critpairs/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "critpairs/pairing.hpp"
#include "critpairs/quadrature.hpp"
#include "critpairs/spiral.hpp"
#include "critpairs/stats.hpp"

namespace critpairs {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kStableCutoff = -0.095;
} // namespace

ScaleFactor scale_factor(double alpha, double n) {
    if (n <= 1.0) throw std::invalid_argument("scale_factor: n must exceed 1");
    ScaleFactor out;
    if (alpha > 0.0) {
        out.value = std::pow(n, 1.5);
    } else if (alpha == 0.0) {
        out.value = std::pow(n, 1.5) / std::log(n);
    } else {
        out.value = std::pow(n, (3.0 + 2.0 * alpha) / (2.0 + alpha));
        out.in_proved_range = alpha > kStableCutoff;
    }
    return out;
}

double fluctuation_scale(double alpha, double n) {
    if (alpha > 0.0) return std::pow(n, 1.5);
    if (alpha == 0.0) return std::pow(n, 1.5) / std::sqrt(std::log(n));
    return std::pow(n, (3.0 + 2.0 * alpha) / (2.0 + alpha));
}

FluctuationRegime regime_for(double alpha) {
    if (alpha > 0.0) return FluctuationRegime::kGaussianPositive;
    if (alpha == 0.0) return FluctuationRegime::kGaussianLog;
    return FluctuationRegime::kStable;
}

const char* regime_name(FluctuationRegime regime) {
    switch (regime) {
        case FluctuationRegime::kGaussianPositive: return "gaussian-positive";
        case FluctuationRegime::kGaussianLog: return "gaussian-log";
        case FluctuationRegime::kStable: return "stable";
    }
    return "unknown";
}

std::vector<FluctuationSample> scaled_fluctuations(const RootSample& sample,
                                                   const CriticalSet& cps,
                                                   std::size_t top_l) {
    const std::size_t n = sample.n;
    const std::size_t l = std::min(top_l, cps.points.size());
    const auto root_order = spiral_order_descending(sample.roots);
    const auto cp_order = spiral_order_descending(cps.points);

    bool order_ok = true;
    for (std::size_t i = 0; i < l; ++i) {
        if (nearest_root_index(sample, cps.points[cp_order[i]]) != root_order[i]) {
            order_ok = false;
            break;
        }
    }

    const double nd = static_cast<double>(n);
    const double scale = fluctuation_scale(sample.alpha, nd);
    const double shrink = 1.0 - 1.0 / nd;
    const FluctuationRegime regime = regime_for(sample.alpha);

    std::vector<FluctuationSample> out;
    out.reserve(l);
    for (std::size_t i = 0; i < l; ++i) {
        const cplx x = sample.roots[root_order[i]];
        const cplx w = cps.points[cp_order[i]];
        const cplx rot = std::abs(x) > 0.0 ? std::conj(x) / std::abs(x) : cplx(1.0, 0.0);
        FluctuationSample fs;
        fs.alpha = sample.alpha;
        fs.n = n;
        fs.rank = i + 1;
        fs.value = scale * rot * (w - x * shrink);
        fs.regime = regime;
        fs.order_ok = order_ok;
        out.push_back(fs);
    }
    return out;
}

GaussTarget gauss_target(const RadialMeasure& mu) {
    const double alpha = mu.alpha();
    if (alpha < 0.0) throw std::domain_error("gauss_target: requires alpha >= 0");
    GaussTarget target;
    if (alpha == 0.0) {
        // var = pi f_mu(1)/4 with f_mu(1) = f_R(1)/(2 pi).
        const double f_edge = mu.edge_density_limit() / (2.0 * kPi);
        target.var_re = target.var_im = kPi * f_edge / 4.0;
        target.cov_re_im = 0.0;
        return target;
    }
    // Second moments of X/(1-X); the mean is zero because m_mu(1) = 1.
    const auto moment = [&mu](auto&& g) {
        return integrate(
            [&mu, &g](double r) {
                const double inner = integrate(
                    [&g, r](double theta) {
                        const cplx x = std::polar(r, theta);
                        return g(x / (1.0 - x));
                    },
                    -kPi, kPi, 1e-11);
                return mu.radial_density(r) * inner / (2.0 * kPi);
            },
            0.0, 1.0, 1e-10);
    };
    target.var_re = moment([](cplx v) { return v.real() * v.real(); });
    target.var_im = moment([](cplx v) { return v.imag() * v.imag(); });
    target.cov_re_im = moment([](cplx v) { return v.real() * v.imag(); });
    return target;
}

double hill_index(std::vector<double> samples, std::size_t k) {
    if (k == 0 || 2 * k >= samples.size())
        throw std::domain_error("hill_index: need 0 < k < samples/2");
    for (double s : samples)
        if (!(s > 0.0)) throw std::domain_error("hill_index: samples must be positive");
    std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k + 1),
                      samples.end(), std::greater<double>());
    const double pivot = samples[k];
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(samples[i] / pivot);
    if (acc <= 0.0) throw std::domain_error("hill_index: zero log-exceedances");
    return static_cast<double>(k) / acc;
}

double angular_test(const std::vector<cplx>& samples, double threshold,
                    const TailLaw& law) {
    std::vector<double> args;
    for (const cplx& z : samples)
        if (std::abs(z) >= threshold) args.push_back(std::arg(z));
    if (args.size() < 200)
        throw InsufficientDataError("angular_test: fewer than 200 exceedances");
    return ks_statistic(std::move(args), [&law](double theta) {
        return law.angular_cdf(theta);
    });
}

} // namespace critpairs
