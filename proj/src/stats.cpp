#include "critpairs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critpairs {

Moments moments(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("moments: need at least 2 samples");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    Moments out;
    out.mean = mean;
    out.variance = m2 / static_cast<double>(n - 1);
    const double v = m2 / static_cast<double>(n);
    out.kurtosis = v > 0.0 ? (m4 / static_cast<double>(n)) / (v * v) : 0.0;
    return out;
}

double trimmed_kurtosis(std::vector<double> xs, double trim) {
    if (trim < 0.0 || trim >= 0.5) throw std::invalid_argument("trimmed_kurtosis: trim");
    std::sort(xs.begin(), xs.end());
    const auto drop = static_cast<std::size_t>(trim * static_cast<double>(xs.size()));
    const std::vector<double> kept(xs.begin() + static_cast<std::ptrdiff_t>(drop),
                                   xs.end() - static_cast<std::ptrdiff_t>(drop));
    return moments(kept).kurtosis;
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("covariance: size mismatch");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n; my /= n;
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) c += (xs[i] - mx) * (ys[i] - my);
    return c / (n - 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    const double c = covariance(xs, ys);
    const double vx = moments(xs).variance;
    const double vy = moments(ys).variance;
    return c / std::sqrt(vx * vy);
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    const double w = h - static_cast<double>(lo);
    return xs[lo] * (1.0 - w) + xs[lo + 1] * w;
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_statistic_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty())
        throw std::invalid_argument("ks_statistic_two_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double nx = static_cast<double>(xs.size());
    const double ny = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        if (xs[i] <= ys[j]) ++i; else ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx -
                                 static_cast<double>(j) / ny));
    }
    return d;
}

double ks_critical_value(std::size_t n, double level) {
    if (level <= 0.0 || level >= 1.0)
        throw std::invalid_argument("ks_critical_value: level outside (0,1)");
    return std::sqrt(-0.5 * std::log(level / 2.0) / static_cast<double>(n));
}

double ks_critical_value_two_sample(std::size_t n, std::size_t m, double level) {
    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      static_cast<double>(n + m);
    return std::sqrt(-0.5 * std::log(level / 2.0) / ne);
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("regression_slope: size mismatch");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

} // namespace critpairs
