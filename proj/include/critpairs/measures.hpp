#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "critpairs/poly_core.hpp"
#include "critpairs/rng.hpp"

namespace critpairs {

enum class RadialModel { kPowerLaw, kCustom };

// Extension point for a user radial density f_R on [0,1) with its edge
// pinch constants.  The CDF is integrated numerically; sampling needs
// either a quantile or a finite density bound (rejection fallback).
struct CustomRadial {
    std::function<double(double)> density;
    std::function<double(double)> quantile;  // may be empty
    double density_bound = 0.0;              // sup f_R, 0 if unknown
    double c_mu = 0.0;
    double C_mu = 0.0;
    double eps = 1.0;
};

// Radially symmetric law on the unit disk with radial density pinched by
// c_mu (1-r)^alpha <= f_R(r) <= C_mu (1-r)^alpha on [1-eps, 1).  The default
// model f_R(r) = (alpha+1)(1-r)^alpha has closed-form CDF and quantile.
// Immutable after construction; safe to share across threads.
class RadialMeasure {
public:
    static RadialMeasure power_law(double alpha, double eps = 1.0);
    static RadialMeasure custom(double alpha, CustomRadial spec);

    double alpha() const { return alpha_; }
    RadialModel model() const { return model_; }
    double c_mu() const { return c_mu_; }
    double C_mu() const { return C_mu_; }
    double eps() const { return eps_; }

    double radial_density(double r) const;

    // C = lim_{r->1} f_R(r)/(1-r)^alpha; alpha+1 for the default model.
    double edge_density_limit() const;

    double cdf(double r) const;       // exact for the default model
    double quantile(double u) const;  // inverse of cdf

    // One radial draw; quantile transform when available, else rejection.
    double sample_radius(RngStream& stream) const;

private:
    RadialMeasure() = default;

    double alpha_ = 0.0;
    RadialModel model_ = RadialModel::kPowerLaw;
    double c_mu_ = 1.0, C_mu_ = 1.0, eps_ = 1.0;
    CustomRadial custom_;
    // checkpointed CDF for the custom model, refined per call
    std::vector<double> grid_r_, grid_cum_;
};

double radial_cdf(const RadialMeasure& mu, double r);
double radial_quantile(const RadialMeasure& mu, double u);

// n i.i.d. draws r e^{i theta}, r from the radial quantile, theta uniform
// on (-pi, pi].  Deterministic given the stream.
RootSample sample_roots(const RadialMeasure& mu, std::size_t n, RngStream& stream);

// Cauchy-Stieltjes transform: F_R(|z|)/z for z != 0, and 0 at z = 0.
cplx stieltjes(const RadialMeasure& mu, cplx z);

// Tail behavior of X/(1-X): index 2+alpha, the sharp tail constant, and the
// limiting angular law of exceedances, proportional to cos^alpha on
// (-pi/2, pi/2).
class TailLaw {
public:
    double index() const { return index_; }
    double constant() const { return constant_; }
    double angular_cdf(double theta) const;
    double angular_quantile(double u) const;

private:
    friend TailLaw tail_law(const RadialMeasure& mu);
    double index_ = 0.0;
    double constant_ = 0.0;
    std::vector<double> theta_, cum_;  // normalized cumulative table
};

// Requires -1 < alpha <= 0 (and a finite edge density limit).
TailLaw tail_law(const RadialMeasure& mu);

} // namespace critpairs
