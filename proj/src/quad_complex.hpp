#pragma once

// Minimal complex arithmetic on __float128 for the companion oracle.  The
// coefficient representation of a degree-n polynomial with roots in the
// unit disk loses interior roots at double precision once n is in the
// dozens (root condition numbers grow like exp(cn)); quadruple precision
// restores them for the n <= 128 oracle range.  Only +,-,*,/ and abs are
// needed, so libquadmath is not required.

#include <cmath>
#include <complex>

namespace critpairs::quad {

struct QComplex {
    __float128 re = 0;
    __float128 im = 0;

    QComplex() = default;
    QComplex(__float128 r, __float128 i) : re(r), im(i) {}
    explicit QComplex(std::complex<double> z)
        : re(static_cast<__float128>(z.real())), im(static_cast<__float128>(z.imag())) {}

    std::complex<double> to_double() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

inline QComplex operator+(QComplex a, QComplex b) { return {a.re + b.re, a.im + b.im}; }
inline QComplex operator-(QComplex a, QComplex b) { return {a.re - b.re, a.im - b.im}; }
inline QComplex operator*(QComplex a, QComplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex operator*(__float128 s, QComplex a) { return {s * a.re, s * a.im}; }
inline QComplex operator/(QComplex a, QComplex b) {
    const __float128 d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

inline __float128 abs2(QComplex a) { return a.re * a.re + a.im * a.im; }

// sqrt via Newton on doubles upgraded to quad (two refinement steps).
inline __float128 qsqrt(__float128 x) {
    if (x <= 0) return 0;
    __float128 r = static_cast<__float128>(std::sqrt(static_cast<double>(x)));
    r = 0.5q * (r + x / r);
    r = 0.5q * (r + x / r);
    return r;
}

inline __float128 qabs(QComplex a) { return qsqrt(abs2(a)); }

} // namespace critpairs::quad
