#pragma once

#include <complex>
#include <vector>

namespace critpairs {

// Eigenvalues of a complex upper-Hessenberg matrix (row-major, dense) by
// the shifted QR iteration with Givens rotations and deflation.  Intended
// for the companion-matrix oracle; sizes up to a few hundred.
std::vector<std::complex<double>> hessenberg_eigenvalues(
    std::vector<std::complex<double>> h, std::size_t n);

} // namespace critpairs
