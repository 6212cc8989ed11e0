#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

namespace critpairs {

// Hungarian algorithm (Jonker-Volgenant potentials, O(n^3)) for a square
// cost matrix.  Returns assignment[row] = column minimizing the total cost.
inline std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return {};
    for (const auto& row : cost)
        if (row.size() != n) throw std::invalid_argument("hungarian: non-square cost matrix");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, n), way(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        p[n] = i;
        std::size_t j0 = n;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0][j] - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 0; j < n; ++j)
        if (p[j] < n) assignment[p[j]] = j;
    return assignment;
}

} // namespace critpairs
