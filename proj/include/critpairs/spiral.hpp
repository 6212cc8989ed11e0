#pragma once

#include <algorithm>
#include <compare>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

namespace critpairs {

// Spiral order on C: by modulus, then by principal argument, then by the
// original index so that coincident values keep a deterministic order.
struct SpiralKey {
    double modulus = 0.0;
    double argument = 0.0;  // in (-pi, pi]; 0 at the origin
    std::size_t tiebreak_index = 0;
};

inline SpiralKey spiral_key(std::complex<double> z, std::size_t index) {
    const double m = std::abs(z);
    double a = m == 0.0 ? 0.0 : std::arg(z);
    if (a <= -std::numbers::pi) a = std::numbers::pi;  // keep arg(-1) = +pi
    return {m, a, index};
}

inline std::strong_ordering spiral_compare(const SpiralKey& a, const SpiralKey& b) {
    if (a.modulus < b.modulus) return std::strong_ordering::less;
    if (a.modulus > b.modulus) return std::strong_ordering::greater;
    if (a.argument < b.argument) return std::strong_ordering::less;
    if (a.argument > b.argument) return std::strong_ordering::greater;
    if (a.tiebreak_index < b.tiebreak_index) return std::strong_ordering::less;
    if (a.tiebreak_index > b.tiebreak_index) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

inline std::strong_ordering spiral_compare(std::complex<double> a, std::size_t ia,
                                           std::complex<double> b, std::size_t ib) {
    return spiral_compare(spiral_key(a, ia), spiral_key(b, ib));
}

inline bool spiral_less(const SpiralKey& a, const SpiralKey& b) {
    return spiral_compare(a, b) == std::strong_ordering::less;
}

// Indices of points sorted descending in spiral order; position k holds the
// index of the (k+1)-th largest element.
inline std::vector<std::size_t> spiral_order_descending(
    const std::vector<std::complex<double>>& pts) {
    std::vector<SpiralKey> keys(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) keys[i] = spiral_key(pts[i], i);
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&keys](std::size_t a, std::size_t b) {
        return spiral_less(keys[b], keys[a]);
    });
    return order;
}

} // namespace critpairs
