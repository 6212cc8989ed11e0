#pragma once

#include <vector>

#include "critpairs/measures.hpp"
#include "critpairs/poly_core.hpp"

namespace critpairs {

// The overall refinement scale a_n of the main theorem: n^{3/2} for
// alpha > 0, n^{3/2}/log n at alpha = 0, n^{(3+2alpha)/(2+alpha)} for
// negative alpha.  The stable branch is only proved for alpha > -0.095;
// outside it the value is still computed but flagged.
struct ScaleFactor {
    double value = 0.0;
    bool in_proved_range = true;
};

ScaleFactor scale_factor(double alpha, double n);

// Per-rank statistic scale of the fluctuation theorems: n^{3/2}/a_n with
// a_n = sqrt(log n) at alpha = 0 and 1 for alpha > 0; the stable scale for
// alpha < 0.
double fluctuation_scale(double alpha, double n);

enum class FluctuationRegime { kGaussianPositive, kGaussianLog, kStable };

FluctuationRegime regime_for(double alpha);
const char* regime_name(FluctuationRegime regime);

struct FluctuationSample {
    double alpha = 0.0;
    std::size_t n = 0;
    std::size_t rank = 0;  // 1-based spiral rank
    cplx value;
    FluctuationRegime regime = FluctuationRegime::kGaussianPositive;
    bool order_ok = true;  // top-L pairing order preserved in this trial
};

// The scaled statistics scale * e^{-i arg X_(i)} (W_(i) - X_(i)(1 - 1/n))
// for ranks i = 1..L.  Trials failing top-L order preservation are flagged,
// not dropped; distributional tests filter on the flag.
std::vector<FluctuationSample> scaled_fluctuations(const RootSample& sample,
                                                   const CriticalSet& cps,
                                                   std::size_t top_l);

// Limit covariance of the Gaussian regimes: the alpha = 0 closed form
// pi f_mu(1)/4, or the second moments of X/(1-X) for alpha > 0 (2-D
// quadrature; the mean vanishes by symmetry).
struct GaussTarget {
    double var_re = 0.0;
    double var_im = 0.0;
    double cov_re_im = 0.0;
};

GaussTarget gauss_target(const RadialMeasure& mu);

// Classical Hill tail-index estimator from the top-k order statistics.
double hill_index(std::vector<double> samples, std::size_t k);

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One-sample KS distance between the arguments of exceedances
// (|z| >= threshold) and the limiting angular law.
double angular_test(const std::vector<cplx>& samples, double threshold,
                    const TailLaw& law);

} // namespace critpairs
