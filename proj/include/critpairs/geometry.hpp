#pragma once

#include <complex>
#include <vector>

namespace critpairs {

using cplx = std::complex<double>;

// Convex hull (counter-clockwise, no repeated endpoint).  Collinear inputs
// collapse to a segment of 2 points; a single distinct point to 1.
std::vector<cplx> convex_hull(std::vector<cplx> pts);

// Signed "outwardness" of p relative to a hull from convex_hull():
// <= 0 inside or on the boundary, > 0 the distance outside.
double hull_excess(const std::vector<cplx>& hull, cplx p);

} // namespace critpairs
