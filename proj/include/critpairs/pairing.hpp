#pragma once

#include <limits>
#include <vector>

#include "critpairs/poly_core.hpp"

namespace critpairs {

// Index of a root closest to z; the smallest index wins ties.
std::size_t nearest_root_index(const RootSample& sample, cplx z);

// Roots in decreasing spiral order: X_(1) down to X_(n).
std::vector<cplx> order_statistics(const RootSample& sample);

struct Annulus {
    double inner = 0.0;
    double outer = std::numeric_limits<double>::infinity();
    bool contains(cplx z) const {
        const double r = std::abs(z);
        return r >= inner && r <= outer;
    }
};

struct PairRecord {
    std::size_t cp_index = 0;    // index into CriticalSet::points
    std::size_t root_index = 0;  // iota(W)
    double dist_first_order = 0.0;
    double dist_second_order = 0.0;
};

struct PairingReport {
    std::vector<PairRecord> pairs;  // one per critical point in the annulus
    bool iota_injective = true;
    bool order_preserved = true;    // top-L spiral ranks match
    std::size_t top_l = 8;
    Annulus annulus;
};

// iota(W) = nearest root index for each critical point in the annulus, with
// the first- and second-order predicted-location distances.  Injectivity
// failures are recorded, not thrown: at finite n the pairing can fail.
PairingReport build_pairing(const RootSample& sample, const CriticalSet& cps,
                            Annulus annulus, std::size_t top_l = 8);

// X_i - (1/n) / ((1/(n-1)) sum_{j != i} 1/(X_i - X_j)).
cplx second_order_prediction(const RootSample& sample, std::size_t i);

// Deterministic pairing certificate for one isolated root xi of
// (z - xi) prod (z - zeta_j).  conditions (i)-(iii) are the geometric gate;
// the two size thresholds come on top of them.
struct Certificate {
    cplx xi;
    double c1 = 0.0, c2 = 0.0;
    double k_lip = 0.0;            // explicit worst-case Lipschitz bound
    double constant = 0.0;         // the C of the size thresholds
    std::size_t n_other = 0;
    double disk_radius = 0.0;      // 3/(2 C1 n)
    cplx predicted_center;
    double error_bound = 0.0;      // C (k_lip + 1) / n^2
    bool cond_i = false;
    bool cond_ii = false;          // false when some |xi-zeta_j| <= 2/(C1 n)
    bool cond_iii = false;
    bool size_c_ok = false;
    bool size_n_ok = false;

    bool conditions_met() const { return cond_i && cond_ii && cond_iii; }
    bool certified() const { return conditions_met() && size_c_ok && size_n_ok; }
};

// Smallest admissible constant plus one: 8(1 + 2 C2^2)/C1^3 + 1.
double default_certificate_constant(double c1, double c2);

Certificate certify(cplx xi, const std::vector<cplx>& others, double c1 = 0.5,
                    double c2 = 2.0, double constant = 0.0);

} // namespace critpairs
