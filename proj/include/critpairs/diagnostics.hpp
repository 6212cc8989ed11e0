#pragma once

#include <vector>

#include "critpairs/measures.hpp"
#include "critpairs/poly_core.hpp"

namespace critpairs {

// Separated epsilon-net of the annulus r1 <= |z| <= r2: radial grid with
// angular step delta/r2, delta = eps/sqrt(2).
struct Net {
    std::vector<cplx> points;
    double eps = 0.0;         // covering radius
    double separation = 0.0;  // guaranteed min pairwise distance eps*r1/(2 r2)
    double r1 = 0.0, r2 = 0.0;

    // Construction-time size bounds.
    double size_bound() const;
};

Net build_net(double r1, double r2, double eps);

// Discrete Cauchy-Stieltjes transform (1/n) sum_{j != i_z} 1/(z - X_j),
// omitting exactly the nearest root (minimal index on ties).
cplx discrete_transform(const RootSample& sample, cplx z);

// Finite-n evaluation of the event parameters.  The asymptotic formulas are
// computed literally, then clipped to the lemma hypotheses (delta_n <=
// eps_n/2) and to a separation scale calibrated so the expected number of
// delta_n-violating pairs is 1/c_n; the paper pins these sequences only up
// to asymptotics, so every field is config-overridable.
struct EventParams {
    double alpha = 0.0;
    double delta = 0.0;        // annulus exponent of Theorem 2.2 (alpha >= 0 presets)
    double eps_n = 0.0;
    double delta_n = 0.0;
    double eps_star_n = 0.0;
    double delta_star_n = 0.0;
    double astar_outer = 1.0;  // < 1 only in the alpha < 0 regime
    double c_n = 0.0;
    double ell_n = 0.0;
    double radial_sep = 0.0;   // F-parallel threshold
    double h_threshold = 0.0;
    double net_eps = 0.0;      // covering radius of the H_n net
    bool net_on_astar = false; // alpha < 0: net covers A*_n instead of A_n
    std::size_t net_budget = 200000;  // cap on net size, 0 = uncapped
};

double default_slow_sequence(std::size_t n);  // max(4, floor(sqrt(log n)))
double default_annulus_exponent(double alpha);

// Theorem 2.2 regime (alpha >= 0), parameters of Lemma 3.4.
EventParams many_pair_params(const RadialMeasure& mu, std::size_t n,
                             double delta = -1.0, double c_n = -1.0,
                             double ell_n = -1.0);
// Fluctuation regime (alpha >= 0), parameters of the Theorem 2.4 proof.
EventParams max_pair_params(const RadialMeasure& mu, std::size_t n,
                            double ell_n = -1.0);
// alpha < 0 regime.
EventParams neg_params(const RadialMeasure& mu, std::size_t n, double ell_n = -1.0);

// Dispatch on the sign of alpha.
EventParams default_event_params(const RadialMeasure& mu, std::size_t n);

struct EventFlags {
    bool e_n = false;
    bool f_n = false;
    bool f_star_n = false;
    bool f_parallel_n = false;
    bool g_n = false;
    bool h_n = false;
    EventParams parameters;
};

EventFlags event_flags(const RootSample& sample, const RadialMeasure& mu,
                       const EventParams& params);

// sup_{z in net} |M-bar(z) - m_mu(z)|, the statistic behind H_n reported
// with the full discrete transform rather than the truncated sum.
double sup_net_deviation(const RootSample& sample, const RadialMeasure& mu,
                         const Net& net);

} // namespace critpairs
