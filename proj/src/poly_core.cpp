#include "critpairs/poly_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "critpairs/geometry.hpp"
#include "critpairs/hessenberg.hpp"
#include "critpairs/spiral.hpp"
#include "quad_complex.hpp"

namespace critpairs {

namespace {

constexpr double kDuplicateGap = 1e-14;

void check_distinct(const std::vector<cplx>& roots) {
    // Lexicographic sort makes near-duplicates neighbors in expectation;
    // points within kDuplicateGap must agree in Re to within the gap.
    std::vector<std::size_t> order(roots.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&roots](std::size_t a, std::size_t b) {
        return roots[a].real() < roots[b].real() ||
               (roots[a].real() == roots[b].real() && roots[a].imag() < roots[b].imag());
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (roots[order[j]].real() - roots[order[i]].real() >= kDuplicateGap) break;
            if (std::abs(roots[order[i]] - roots[order[j]]) < kDuplicateGap)
                throw DegenerateInputError("critical_points: duplicate roots (gap < 1e-14)");
        }
    }
}

// Fused certification pass: S1(z), nearest root distance and index.
struct PointCheck {
    cplx s1;
    double nearest_dist;
    std::size_t nearest_index;
};

PointCheck check_point(const std::vector<double>& xr, const std::vector<double>& xi,
                       double zr, double zi) {
    double s1r = 0.0, s1i = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    const std::size_t n = xr.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double dr = zr - xr[j];
        const double di = zi - xi[j];
        const double d2 = dr * dr + di * di;
        const double inv = 1.0 / d2;
        s1r += dr * inv;
        s1i -= di * inv;
        if (d2 < best) { best = d2; best_idx = j; }
    }
    return {cplx(s1r, s1i), std::sqrt(best), best_idx};
}

} // namespace

std::pair<cplx, cplx> log_derivative_sums(const std::vector<cplx>& roots, cplx z) {
    cplx s1{}, s2{};
    for (std::size_t j = 0; j < roots.size(); ++j) {
        const cplx d = z - roots[j];
        if (d == cplx(0.0, 0.0)) throw PoleError(j);
        const cplx inv = 1.0 / d;
        s1 += inv;
        s2 += inv * inv;
    }
    return {s1, s2};
}

CriticalSet critical_points(const RootSample& sample, const SolverOptions& opts) {
    const std::size_t n = sample.n;
    if (n < 2 || sample.roots.size() != n)
        throw std::invalid_argument("critical_points: need n >= 2 roots");
    if (opts.tol < 1e-13) throw std::invalid_argument("critical_points: tol below 1e-13");
    check_distinct(sample.roots);

    const std::size_t m = n - 1;
    std::vector<double> xr(n), xi(n);
    for (std::size_t j = 0; j < n; ++j) {
        xr[j] = sample.roots[j].real();
        xi[j] = sample.roots[j].imag();
    }

    // Seeds: X(1 - 1/n) at the predicted locations, spiral-descending, with
    // the spiral-minimal root's seed dropped (p' has n-1 zeros).
    const auto order = spiral_order_descending(sample.roots);
    const double shrink = 1.0 - 1.0 / static_cast<double>(n);
    std::vector<double> zr(m), zi(m);
    for (std::size_t i = 0; i < m; ++i) {
        zr[i] = sample.roots[order[i]].real() * shrink;
        zi[i] = sample.roots[order[i]].imag() * shrink;
    }

    std::vector<char> frozen(m, 0);
    std::vector<double> cr(m), ci(m);  // per-sweep corrections
    std::size_t active = m;
    std::size_t sweeps = 0;

    while (active > 0 && sweeps < opts.max_iterations) {
        ++sweeps;
        for (std::size_t i = 0; i < m; ++i) {
            if (frozen[i]) continue;
            const double pir = zr[i], pii = zi[i];

            // S1, S2 over the roots of p.
            double s1r = 0.0, s1i = 0.0, s2r = 0.0, s2i = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double dr = pir - xr[j];
                const double di = pii - xi[j];
                const double inv = 1.0 / (dr * dr + di * di);
                const double ur = dr * inv;
                const double ui = -di * inv;
                s1r += ur;
                s1i += ui;
                s2r += ur * ur - ui * ui;
                s2i += 2.0 * ur * ui;
            }

            // Aberth coupling over the other approximants.
            double ar = 0.0, ai = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                if (k == i) continue;
                const double dr = pir - zr[k];
                const double di = pii - zi[k];
                const double inv = 1.0 / (dr * dr + di * di);
                ar += dr * inv;
                ai -= di * inv;
            }

            // Newton correction for q = p': N = S1 / (S1^2 - S2).
            const cplx s1(s1r, s1i), s2(s2r, s2i);
            const cplx denom_newton = s1 * s1 - s2;
            cplx w;
            bool fallback = false;
            if (!std::isfinite(s1r) || !std::isfinite(s1i) || !std::isfinite(s2r) ||
                !std::isfinite(s2i) || denom_newton == cplx(0.0, 0.0)) {
                // Landed on a root of p or a zero of p''; step off and retry.
                fallback = true;
                w = cplx(-64.0 * opts.tol, -64.0 * opts.tol) *
                    (1.0 + std::abs(cplx(pir, pii)));
            } else {
                const cplx nstep = s1 / denom_newton;
                const cplx aberth_den = 1.0 - nstep * cplx(ar, ai);
                w = std::abs(aberth_den) < 1e-12 ? nstep : nstep / aberth_den;
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                    fallback = true;
                    w = cplx(-64.0 * opts.tol, -64.0 * opts.tol) *
                        (1.0 + std::abs(cplx(pir, pii)));
                }
            }

            zr[i] = pir - w.real();
            zi[i] = pii - w.imag();
            const double scale = 1.0 + std::hypot(zr[i], zi[i]);
            if (!fallback && std::abs(w) <= opts.tol * scale) {
                frozen[i] = 1;
                --active;
            }
        }
    }

    CriticalSet out;
    out.method = SolverMethod::kSimultaneousIteration;
    out.iterations = sweeps;
    out.points.resize(m);
    out.residuals.resize(m);
    out.nearest_root.resize(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.points[i] = cplx(zr[i], zi[i]);
        const PointCheck chk = check_point(xr, xi, zr[i], zi[i]);
        out.residuals[i] = std::abs(chk.s1) * chk.nearest_dist;
        out.nearest_root[i] = chk.nearest_index;
        worst = std::max(worst, out.residuals[i]);
    }
    if (active > 0 || worst > opts.residual_accept)
        throw SolverFailure("critical_points: no convergence after " +
                                std::to_string(sweeps) + " sweeps",
                            worst);
    return out;
}

CriticalSet companion_oracle(const RootSample& sample) {
    using quad::QComplex;
    const std::size_t n = sample.n;
    if (n < 2 || sample.roots.size() != n)
        throw std::invalid_argument("companion_oracle: need n >= 2 roots");
    if (n > 128) throw std::length_error("companion_oracle: n > 128");
    check_distinct(sample.roots);

    // Expand p to monic coefficients in quadruple precision: interior roots
    // of the expanded polynomial have condition numbers ~ exp(cn), so the
    // coefficient route needs headroom that doubles cannot provide at n = 64+.
    std::vector<QComplex> c(n + 1);
    c[0] = QComplex(1, 0);
    std::size_t deg = 0;
    for (const cplx& root : sample.roots) {
        const QComplex r(root);
        c[deg + 1] = c[deg];
        for (std::size_t k = deg; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = QComplex(0, 0) - r * c[0];
        ++deg;
    }

    // Differentiate and normalize to monic q(z) = p'(z)/n; q[k] is the z^k
    // coefficient and q[m] = 1.
    const std::size_t m = n - 1;
    std::vector<QComplex> q(m + 1);
    for (std::size_t k = 0; k <= m; ++k)
        q[k] = (static_cast<__float128>(k + 1) / static_cast<__float128>(n)) * c[k + 1];

    // Companion matrix of q in doubles; its eigenvalues seed the refinement.
    std::vector<cplx> H(m * m, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m; ++i) H[i * m + (m - 1)] = -q[i].to_double();
    for (std::size_t i = 1; i < m; ++i) H[i * m + (i - 1)] = 1.0;
    std::vector<cplx> first = hessenberg_eigenvalues(std::move(H), m);

    // Quad-precision Ehrlich-Aberth sweeps on the Horner form of q.  The
    // coupling term keeps estimates from collapsing onto one zero of a
    // close pair; everything here stays in coefficient space, independent
    // of the root-based sums used by critical_points.
    std::vector<QComplex> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = QComplex(first[i]);
    const __float128 tol = 1e-25q;
    for (int sweep = 0; sweep < 40; ++sweep) {
        __float128 worst_step = 0;
        for (std::size_t i = 0; i < m; ++i) {
            QComplex val = q[m];
            for (std::size_t k = m; k-- > 0;) val = val * w[i] + q[k];
            QComplex dval = (m > 0) ? QComplex(static_cast<__float128>(m), 0) * q[m]
                                    : QComplex(0, 0);
            for (std::size_t k = m; k-- > 1;)
                dval = dval * w[i] + QComplex(static_cast<__float128>(k), 0) * q[k];
            if (dval.re == 0 && dval.im == 0) continue;
            const QComplex newton = val / dval;
            QComplex coupling(0, 0);
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                const QComplex d = w[i] - w[j];
                if (abs2(d) == 0) continue;
                coupling = coupling + QComplex(1, 0) / d;
            }
            const QComplex den = QComplex(1, 0) - newton * coupling;
            const QComplex step = (abs2(den) > 1e-48q) ? newton / den : newton;
            w[i] = w[i] - step;
            const __float128 rel = abs2(step) / (1 + abs2(w[i]));
            if (rel > worst_step) worst_step = rel;
        }
        if (worst_step < tol * tol) break;
    }
    std::vector<cplx> eigs(m);
    for (std::size_t i = 0; i < m; ++i) eigs[i] = w[i].to_double();

    std::vector<double> xr(n), xi(n);
    for (std::size_t j = 0; j < n; ++j) {
        xr[j] = sample.roots[j].real();
        xi[j] = sample.roots[j].imag();
    }
    CriticalSet out;
    out.method = SolverMethod::kCompanionOracle;
    out.iterations = 0;
    out.points = std::move(eigs);
    out.residuals.resize(m);
    out.nearest_root.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const PointCheck chk = check_point(xr, xi, out.points[i].real(), out.points[i].imag());
        out.residuals[i] = std::abs(chk.s1) * chk.nearest_dist;
        out.nearest_root[i] = chk.nearest_index;
    }
    return out;
}

IdentityReport verify_identities(const RootSample& sample, const CriticalSet& cps) {
    IdentityReport rep;
    for (double r : cps.residuals) rep.max_residual = std::max(rep.max_residual, r);

    cplx sum_roots{}, sum_points{};
    for (const cplx& x : sample.roots) sum_roots += x;
    for (const cplx& w : cps.points) sum_points += w;
    const double ratio = static_cast<double>(sample.n - 1) / static_cast<double>(sample.n);
    rep.sum_error = std::abs(sum_points - ratio * sum_roots);

    const auto hull = convex_hull(sample.roots);
    for (const cplx& w : cps.points)
        rep.hull_excess = std::max(rep.hull_excess, hull_excess(hull, w));

    // GLPair: W - X_i = -1 / sum_{j != i} 1/(W - X_j) at the nearest root.
    for (std::size_t i = 0; i < cps.points.size(); ++i) {
        const cplx w = cps.points[i];
        const cplx x = sample.roots[cps.nearest_root[i]];
        auto [s1, s2] = log_derivative_sums(sample.roots, w);
        (void)s2;
        const cplx excl = s1 - 1.0 / (w - x);
        if (excl == cplx(0.0, 0.0)) continue;
        rep.max_glpair_error = std::max(rep.max_glpair_error, std::abs(w - x + 1.0 / excl));
    }
    return rep;
}

} // namespace critpairs
