#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace critpairs {

using cplx = std::complex<double>;

// One Monte Carlo trial: n i.i.d. roots of p(z) = prod (z - X_i).
struct RootSample {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<cplx> roots;
    double alpha = 0.0;  // exponent of the generating measure, for provenance
};

enum class SolverMethod { kSimultaneousIteration, kCompanionOracle };

// The n-1 critical points with certification data.
struct CriticalSet {
    std::vector<cplx> points;
    std::vector<double> residuals;        // |S1(W)| * min_j |W - X_j|, scale free
    std::vector<std::size_t> nearest_root;  // argmin_j |W - X_j|, min index on ties
    std::size_t iterations = 0;
    SolverMethod method = SolverMethod::kSimultaneousIteration;
};

struct PoleError : std::runtime_error {
    explicit PoleError(std::size_t idx)
        : std::runtime_error("evaluation point coincides with root " + std::to_string(idx)),
          index(idx) {}
    std::size_t index;
};

struct DegenerateInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolverFailure : std::runtime_error {
    SolverFailure(const std::string& what, double worst)
        : std::runtime_error(what), worst_residual(worst) {}
    double worst_residual;
};

// S1 = sum 1/(z-X_j) = p'/p and S2 = sum 1/(z-X_j)^2; note p''/p = S1^2 - S2.
std::pair<cplx, cplx> log_derivative_sums(const std::vector<cplx>& roots, cplx z);

struct SolverOptions {
    double tol = 1e-12;                 // correction stop: |dz| <= tol*(1+|z|)
    double residual_accept = 1e-9;      // certification threshold
    std::size_t max_iterations = 500;
};

// All n-1 zeros of p' by a simultaneous Newton-type (Aberth-Ehrlich)
// iteration working directly on the root representation; coefficients are
// never formed.  Seeds are X_i(1 - 1/n) in spiral order with the
// spiral-minimal root dropped.
CriticalSet critical_points(const RootSample& sample, const SolverOptions& opts = {});

// Independent cross-check: expand p, differentiate, and take eigenvalues of
// the companion matrix of p'.  Coefficient expansion limits it to n <= 128.
CriticalSet companion_oracle(const RootSample& sample);

// Per-trial exact identities, cheap enough to run on every trial.
struct IdentityReport {
    double max_residual = 0.0;
    double sum_error = 0.0;        // |sum W - (n-1)/n sum X|
    double hull_excess = 0.0;      // worst Gauss-Lucas violation
    double max_glpair_error = 0.0; // worst |W - X_i + 1/sum_{j!=i} 1/(W-X_j)|
};

IdentityReport verify_identities(const RootSample& sample, const CriticalSet& cps);

} // namespace critpairs
