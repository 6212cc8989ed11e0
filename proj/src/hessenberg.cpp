#include "critpairs/hessenberg.hpp"

#include <cmath>
#include <stdexcept>

namespace critpairs {

namespace {

using cplx = std::complex<double>;

// Complex Givens pair (c real, s complex) with
// [c s; -conj(s) c] * [f; g] = [r; 0].
void make_givens(cplx f, cplx g, double& c, cplx& s) {
    const double af = std::abs(f);
    const double ag = std::abs(g);
    if (ag == 0.0) { c = 1.0; s = 0.0; return; }
    if (af == 0.0) { c = 0.0; s = std::conj(g) / ag; return; }
    const double r = std::hypot(af, ag);
    c = af / r;
    s = (f / af) * std::conj(g) / r;
}

// Diagonal similarity scaling (Parlett-Reinsch, radix 2); preserves the
// Hessenberg pattern and tames companion matrices with uneven coefficients.
void balance(std::vector<cplx>& h, std::size_t n) {
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 32) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double col = 0.0, row = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                col += std::abs(h[j * n + i]);
                row += std::abs(h[i * n + j]);
            }
            if (col == 0.0 || row == 0.0) continue;
            double f = 1.0;
            const double s = col + row;
            while (col < row / 2.0) { col *= 4.0; f *= 2.0; }
            while (col >= row * 2.0) { col /= 4.0; f /= 2.0; }
            if (f != 1.0 && (col + row) / f < 0.95 * s) {
                changed = true;
                for (std::size_t j = 0; j < n; ++j) h[i * n + j] /= f;
                for (std::size_t j = 0; j < n; ++j) h[j * n + i] *= f;
            }
        }
    }
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    // Eigenvalue of [[a,b],[c,d]] closest to d.
    const cplx tr2 = 0.5 * (a + d);
    const cplx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
    const cplx l1 = tr2 + disc;
    const cplx l2 = tr2 - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

} // namespace

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> h, std::size_t n) {
    if (h.size() != n * n) throw std::invalid_argument("hessenberg_eigenvalues: bad size");
    std::vector<cplx> eig(n);
    if (n == 0) return eig;
    balance(h, n);

    constexpr double eps = 2.220446049250313e-16;
    auto H = [&h, n](std::size_t i, std::size_t j) -> cplx& { return h[i * n + j]; };

    std::size_t hi = n - 1;
    std::size_t total_iter = 0;
    const std::size_t iter_budget = 60 * n + 200;
    std::size_t since_deflation = 0;

    std::vector<double> cs(n);
    std::vector<cplx> sn(n);

    while (true) {
        // Deflate negligible subdiagonals.
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(H(lo, lo - 1));
            if (sub <= eps * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo)))) {
                H(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = H(hi, hi);
            since_deflation = 0;
            if (hi == 0) break;
            --hi;
            continue;
        }

        if (++total_iter > iter_budget)
            throw std::runtime_error("hessenberg_eigenvalues: QR iteration stalled");

        cplx shift = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi),
                                     H(hi, hi - 1), H(hi, hi));
        if (++since_deflation % 24 == 0) {
            // Exceptional shift to break symmetry-induced cycling.
            shift = H(hi, hi) + cplx(1.0, 0.5) * std::abs(H(hi, hi - 1));
        }

        for (std::size_t k = lo; k <= hi; ++k) H(k, k) -= shift;

        // (H - shift I) = Q R with Q a product of Givens rotations ...
        for (std::size_t k = lo; k < hi; ++k) {
            make_givens(H(k, k), H(k + 1, k), cs[k], sn[k]);
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx t0 = H(k, j), t1 = H(k + 1, j);
                H(k, j) = cs[k] * t0 + sn[k] * t1;
                H(k + 1, j) = -std::conj(sn[k]) * t0 + cs[k] * t1;
            }
        }
        // ... then H <- R Q restores Hessenberg form.
        for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t top = lo;
            for (std::size_t i = top; i <= std::min(k + 2, hi); ++i) {
                const cplx t0 = H(i, k), t1 = H(i, k + 1);
                H(i, k) = cs[k] * t0 + std::conj(sn[k]) * t1;
                H(i, k + 1) = -sn[k] * t0 + cs[k] * t1;
            }
        }
        for (std::size_t k = lo; k <= hi; ++k) H(k, k) += shift;
    }
    return eig;
}

} // namespace critpairs
