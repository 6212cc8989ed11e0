#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace critpairs {

// Adaptive Gauss-Kronrod 15(7) quadrature.  The Kronrod nodes are interior,
// so integrable endpoint singularities like (1-r)^alpha, alpha > -1, are
// handled by bisection alone.
namespace gk15 {

// Nodes/weights for [-1,1]; positive half, symmetric.
inline constexpr double xk[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};
inline constexpr double wk[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};
// Gauss-7 weights aligned with xk[0], xk[2], xk[4], xk[6].
inline constexpr double wg[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

template <class F>
inline void rule(F&& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = wk[0] * fc;
    double resg = wg[0] * fc;
    for (int j = 1; j < 8; ++j) {
        const double fsum = f(c - h * xk[j]) + f(c + h * xk[j]);
        resk += wk[j] * fsum;
        if (j % 2 == 0) resg += wg[j / 2] * fsum;
    }
    value = resk * h;
    err = std::abs((resk - resg) * h);
}

} // namespace gk15

struct QuadResult {
    double value = 0.0;
    double error = 0.0;      // accumulated error estimate
    bool converged = true;   // false if the depth limit was hit somewhere
};

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              int max_depth = 48, std::size_t max_rule_calls = 400000) {
    struct Frame { double a, b, tol; int depth; };
    QuadResult out;
    Frame stack[64];
    int top = 0;
    std::size_t calls = 0;
    stack[top++] = {a, b, abs_tol, 0};
    while (top > 0) {
        Frame fr = stack[--top];
        double v, e;
        gk15::rule(f, fr.a, fr.b, v, e);
        ++calls;
        // A relative floor keeps peaked integrands from demanding impossible
        // absolute accuracy on subintervals with large values.
        const bool accept = e <= fr.tol || e <= 1e-13 * std::abs(v) ||
                            fr.depth >= max_depth || calls >= max_rule_calls;
        if (accept) {
            out.value += v;
            out.error += e;
            if (e > fr.tol && e > 1e-13 * std::abs(v)) out.converged = false;
            continue;
        }
        const double m = 0.5 * (fr.a + fr.b);
        stack[top++] = {fr.a, m, 0.5 * fr.tol, fr.depth + 1};
        stack[top++] = {m, fr.b, 0.5 * fr.tol, fr.depth + 1};
    }
    return out;
}

// Convenience wrapper with the artifact-wide default tolerance.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10) {
    return integrate_adaptive(std::forward<F>(f), a, b, abs_tol).value;
}

} // namespace critpairs
