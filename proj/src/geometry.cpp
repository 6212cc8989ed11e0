#include "critpairs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace critpairs {

namespace {

double cross(cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

} // namespace

std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;

    std::vector<cplx> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {            // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {          // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() == 2 && hull[0] == hull[1]) hull.resize(1);
    return hull;
}

double hull_excess(const std::vector<cplx>& hull, cplx p) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (hull.size() == 1) return std::abs(p - hull[0]);
    if (hull.size() == 2) return point_segment_distance(p, hull[0], hull[1]);
    // CCW polygon: p is inside iff every cross product is >= 0.  When it is
    // outside, the excess is the distance to the boundary.
    bool inside = true;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const cplx a = hull[i];
        const cplx b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < 0.0) { inside = false; break; }
    }
    if (inside) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i)
        d = std::min(d, point_segment_distance(p, hull[i], hull[(i + 1) % hull.size()]));
    return d;
}

} // namespace critpairs
