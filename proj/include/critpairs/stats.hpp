#pragma once

#include <functional>
#include <span>
#include <vector>

namespace critpairs {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double kurtosis = 0.0;  // E[(x-m)^4]/Var^2, 3 for a Gaussian
};

Moments moments(std::span<const double> xs);

// Kurtosis after symmetrically dropping the outer trim fraction on each
// side; stable for samples whose fourth moment barely exists.
double trimmed_kurtosis(std::vector<double> xs, double trim);

double covariance(std::span<const double> xs, std::span<const double> ys);
double pearson(std::span<const double> xs, std::span<const double> ys);

// Type-7 (linear interpolation) sample quantile, q in [0,1].
double quantile(std::vector<double> xs, double q);

// One-sample Kolmogorov-Smirnov distance against a CDF.
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance.
double ks_statistic_two_sample(std::vector<double> xs, std::vector<double> ys);

// Asymptotic one-sample critical value sqrt(-ln(level/2)/(2n));
// at level 0.01 this is the 1.63/sqrt(n) used throughout.
double ks_critical_value(std::size_t n, double level);

// Two-sample version with effective size nm/(n+m).
double ks_critical_value_two_sample(std::size_t n, std::size_t m, double level);

// Least-squares slope of y against x.
double regression_slope(std::span<const double> x, std::span<const double> y);

} // namespace critpairs
