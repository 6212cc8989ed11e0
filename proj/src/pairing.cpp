#include "critpairs/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "critpairs/spiral.hpp"

namespace critpairs {

std::size_t nearest_root_index(const RootSample& sample, cplx z) {
    if (sample.roots.empty()) throw std::invalid_argument("nearest_root_index: no roots");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t j = 0; j < sample.roots.size(); ++j) {
        const double d = std::norm(z - sample.roots[j]);
        if (d < best) { best = d; best_idx = j; }
    }
    return best_idx;
}

std::vector<cplx> order_statistics(const RootSample& sample) {
    const auto order = spiral_order_descending(sample.roots);
    std::vector<cplx> out(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) out[k] = sample.roots[order[k]];
    return out;
}

cplx second_order_prediction(const RootSample& sample, std::size_t i) {
    const std::size_t n = sample.n;
    if (i >= n) throw std::out_of_range("second_order_prediction: index");
    const cplx xi = sample.roots[i];
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const cplx d = xi - sample.roots[j];
        if (d == cplx(0.0, 0.0)) throw PoleError(j);
        acc += 1.0 / d;
    }
    const cplx mean_inv_gap = acc / static_cast<double>(n - 1);
    return xi - (1.0 / static_cast<double>(n)) / mean_inv_gap;
}

PairingReport build_pairing(const RootSample& sample, const CriticalSet& cps,
                            Annulus annulus, std::size_t top_l) {
    PairingReport report;
    report.annulus = annulus;
    report.top_l = top_l;

    const double shrink = 1.0 - 1.0 / static_cast<double>(sample.n);
    std::unordered_set<std::size_t> seen;
    for (std::size_t k = 0; k < cps.points.size(); ++k) {
        const cplx w = cps.points[k];
        if (!annulus.contains(w)) continue;
        PairRecord rec;
        rec.cp_index = k;
        rec.root_index = nearest_root_index(sample, w);
        const cplx x = sample.roots[rec.root_index];
        rec.dist_first_order = std::abs(w - x * shrink);
        rec.dist_second_order = std::abs(w - second_order_prediction(sample, rec.root_index));
        if (!seen.insert(rec.root_index).second) report.iota_injective = false;
        report.pairs.push_back(rec);
    }

    // Top-L order preservation: the k-th largest critical point must pair
    // with the k-th largest root.
    const auto root_order = spiral_order_descending(sample.roots);
    const auto cp_order = spiral_order_descending(cps.points);
    const std::size_t l = std::min(top_l, cps.points.size());
    for (std::size_t k = 0; k < l; ++k) {
        const std::size_t paired = nearest_root_index(sample, cps.points[cp_order[k]]);
        if (paired != root_order[k]) { report.order_preserved = false; break; }
    }
    return report;
}

double default_certificate_constant(double c1, double c2) {
    return 8.0 * (1.0 + 2.0 * c2 * c2) / (c1 * c1 * c1) + 1.0;
}

Certificate certify(cplx xi, const std::vector<cplx>& others, double c1, double c2,
                    double constant) {
    if (others.empty()) throw std::invalid_argument("certify: others must be nonempty");
    if (c1 <= 0.0 || c2 < c1) throw std::invalid_argument("certify: need 0 < C1 <= C2");
    if (constant <= 0.0) constant = default_certificate_constant(c1, c2);

    const std::size_t m = others.size();
    const double md = static_cast<double>(m);

    Certificate cert;
    cert.xi = xi;
    cert.c1 = c1;
    cert.c2 = c2;
    cert.constant = constant;
    cert.n_other = m;
    cert.disk_radius = 3.0 / (2.0 * c1 * md);

    cplx s{};
    double min_gap = std::numeric_limits<double>::infinity();
    for (const cplx& z : others) {
        const cplx d = xi - z;
        if (d == cplx(0.0, 0.0)) throw std::invalid_argument("certify: xi coincides with a zeta_j");
        s += 1.0 / d;
        min_gap = std::min(min_gap, std::abs(d));
    }
    s /= md;

    cert.predicted_center = xi - (1.0 / (md + 1.0)) / s;
    cert.cond_i = c1 <= std::abs(s) && std::abs(s) <= c2;
    cert.cond_iii = min_gap > 3.0 / (c1 * md);

    // Condition (ii) via the explicit derivative bound on |z - xi| <= 2/(C1 n):
    // k_lip = (1/n) sum (d_j - 2/(C1 n))^{-2}, valid only if every d_j clears
    // the disk; otherwise the sum has a pole inside and (ii) fails.
    const double margin = 2.0 / (c1 * md);
    if (min_gap > margin) {
        double acc = 0.0;
        for (const cplx& z : others) {
            const double t = std::abs(xi - z) - margin;
            acc += 1.0 / (t * t);
        }
        cert.k_lip = acc / md;
        cert.cond_ii = true;
    } else {
        cert.k_lip = std::numeric_limits<double>::infinity();
        cert.cond_ii = false;
    }

    cert.error_bound = constant * (cert.k_lip + 1.0) / (md * md);
    cert.size_c_ok = constant > 8.0 * (1.0 + 2.0 * c2 * c2) / (c1 * c1 * c1);
    cert.size_n_ok =
        md > 4.0 * c2 * std::max(1.0 / c1, constant * (cert.k_lip + 1.0));
    return cert;
}

} // namespace critpairs
