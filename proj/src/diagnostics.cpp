#include "critpairs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "critpairs/quadrature.hpp"

namespace critpairs {

namespace {

constexpr double kPi = std::numbers::pi;

// The asymptotic annulus widths exceed the disk at very small n; the lemma
// hypotheses need eps_n < 1/2, and capping at 1/4 keeps A_n, B_n, A*_n in
// the outer half of the disk.  The cap only binds below n ~ 75.
constexpr double kMaxAnnulusWidth = 0.25;

// Expected-pairs separation scale: delta with n^2 delta^2 J / 2 = 1/c_n,
// J = int f_R^2 over the edge band of width 2 eps_n.
double calibrated_separation(const RadialMeasure& mu, std::size_t n, double eps_n,
                             double c_n) {
    const double lo = std::max(0.0, 1.0 - 2.0 * eps_n);
    const double j = integrate(
        [&mu](double r) { const double f = mu.radial_density(r); return f * f; },
        lo, 1.0, 1e-9);
    if (!(j > 0.0)) return eps_n / 2.0;
    const double nd = static_cast<double>(n);
    return std::sqrt(2.0 / (c_n * nd * nd * j));
}

// Covering radius floor keeping the net size within budget:
// |net| ~ 22 eps^{-2} r2 (r2 - r1).
double budget_floor(double width, std::size_t budget) {
    if (budget == 0) return 0.0;
    return std::sqrt(22.0 * std::max(width, 1e-12) / static_cast<double>(budget));
}

// Spatial hash over cells of side `cell` for neighbor scans.
struct Grid {
    double cell;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

    static std::uint64_t key(std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^
               (static_cast<std::uint64_t>(cy) & 0xffffffffull);
    }
    void insert(const std::vector<cplx>& pts, double cell_size) {
        cell = cell_size;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto cx = static_cast<std::int64_t>(std::floor(pts[i].real() / cell));
            const auto cy = static_cast<std::int64_t>(std::floor(pts[i].imag() / cell));
            buckets[key(cx, cy)].push_back(i);
        }
    }
    template <class Fn>
    void for_neighbors(cplx z, Fn&& fn) const {
        const auto cx = static_cast<std::int64_t>(std::floor(z.real() / cell));
        const auto cy = static_cast<std::int64_t>(std::floor(z.imag() / cell));
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = buckets.find(key(cx + dx, cy + dy));
                if (it == buckets.end()) continue;
                for (std::size_t idx : it->second) fn(idx);
            }
    }
};

} // namespace

double Net::size_bound() const {
    return eps <= r2 - r1 ? 22.0 / (eps * eps) * r2 * (r2 - r1) : 18.0 * r2 / eps;
}

Net build_net(double r1, double r2, double eps) {
    if (!(0.0 < r1 && r1 < r2)) throw std::invalid_argument("build_net: need 0 < r1 < r2");
    if (!(0.0 < eps && eps < r2 / 2.0))
        throw std::invalid_argument("build_net: need 0 < eps < r2/2");
    Net net;
    net.eps = eps;
    net.separation = eps * r1 / (2.0 * r2);
    net.r1 = r1;
    net.r2 = r2;

    const double delta = eps / std::sqrt(2.0);
    const double angle_step = delta / r2;
    const auto k_count = static_cast<std::size_t>(std::floor(2.0 * kPi * r2 / delta));
    const double inner_rows = std::floor((r2 - r1) / delta) - 1.0;
    const auto j_count = static_cast<std::size_t>(std::max(0.0, inner_rows)) + 1;

    net.points.reserve((j_count + 1) * k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        const double theta = static_cast<double>(k) * angle_step;
        for (std::size_t j = 0; j < j_count; ++j)
            net.points.push_back(std::polar(r1 + static_cast<double>(j) * delta, theta));
        net.points.push_back(std::polar(r2, theta));
    }
    return net;
}

cplx discrete_transform(const RootSample& sample, cplx z) {
    const std::size_t n = sample.n;
    if (n < 2) throw std::invalid_argument("discrete_transform: need n >= 2");
    double best = std::numeric_limits<double>::infinity();
    std::size_t i_z = 0;
    std::size_t zero_hits = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::norm(z - sample.roots[j]);
        if (d == 0.0) ++zero_hits;
        if (d < best) { best = d; i_z = j; }
    }
    if (zero_hits >= 2)
        throw DegenerateInputError("discrete_transform: z coincides with multiple roots");
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i_z) continue;
        acc += 1.0 / (z - sample.roots[j]);
    }
    return acc / static_cast<double>(n);
}

double default_slow_sequence(std::size_t n) {
    const double r = std::floor(std::sqrt(std::log(static_cast<double>(n))));
    return std::max(4.0, r);
}

double default_annulus_exponent(double alpha) {
    return 0.5 * (1.0 / (4.0 * alpha + 3.0) + 1.0 / (alpha + 1.0));
}

EventParams many_pair_params(const RadialMeasure& mu, std::size_t n, double delta,
                             double c_n, double ell_n) {
    const double alpha = mu.alpha();
    if (alpha < 0.0) throw std::domain_error("many_pair_params: requires alpha >= 0");
    EventParams p;
    p.alpha = alpha;
    p.delta = delta > 0.0 ? delta : default_annulus_exponent(alpha);
    p.c_n = c_n > 0.0 ? c_n : default_slow_sequence(n);
    p.ell_n = ell_n > 0.0 ? ell_n : default_slow_sequence(n);
    const double nd = static_cast<double>(n);
    const double logn = std::log(nd);

    p.eps_n = std::min(std::pow(nd, -p.delta), kMaxAnnulusWidth);
    const double delta_formula =
        std::pow(std::pow(p.c_n, 7.0) * logn, 0.75) / std::pow(nd, 0.75 + p.delta / 4.0);
    p.delta_n = std::min({delta_formula, p.eps_n / 2.0,
                          calibrated_separation(mu, n, p.eps_n, p.c_n)});
    p.eps_star_n = std::min(std::pow(p.ell_n * p.ell_n / nd, 1.0 / (alpha + 1.0)),
                            kMaxAnnulusWidth);
    p.delta_star_n =
        std::pow(p.ell_n, -3.0) * std::pow(nd, -0.5 / (alpha + 1.0));
    p.radial_sep = 1.0 / (nd * std::pow(p.ell_n, 3.0));
    p.h_threshold = 1.0 / p.c_n;
    const double net_formula = std::cbrt(p.eps_n) * std::pow(p.delta_n, 2.0 / 3.0) /
                               (p.c_n * p.c_n);
    p.net_eps = std::max(net_formula, budget_floor(p.eps_n, p.net_budget));
    p.net_on_astar = false;
    return p;
}

EventParams max_pair_params(const RadialMeasure& mu, std::size_t n, double ell_n) {
    const double alpha = mu.alpha();
    if (alpha < 0.0) throw std::domain_error("max_pair_params: requires alpha >= 0");
    EventParams p;
    p.alpha = alpha;
    p.ell_n = ell_n > 0.0 ? ell_n : default_slow_sequence(n);
    p.c_n = std::pow(p.ell_n, 4.0);
    p.delta = 1.0 / (4.0 * alpha + 2.0);
    const double nd = static_cast<double>(n);
    const double ap1 = alpha + 1.0;

    p.eps_n = std::min(std::pow(p.ell_n, -4.0) *
                           std::pow(nd, -(1.0 + 2.0 * alpha) / (2.0 * ap1 * ap1)),
                       kMaxAnnulusWidth);
    const double delta_formula = std::pow(nd, -(3.0 + 4.0 * alpha) / (4.0 * ap1 * ap1));
    p.delta_n = std::min({delta_formula, p.eps_n / 2.0,
                          calibrated_separation(mu, n, p.eps_n, p.c_n)});
    p.eps_star_n = std::min(std::pow(p.ell_n * p.ell_n / nd, 1.0 / ap1),
                            kMaxAnnulusWidth);
    p.delta_star_n = std::pow(p.ell_n, -3.0) * std::pow(nd, -0.5 / ap1);
    p.radial_sep = 1.0 / (nd * std::pow(p.ell_n, 3.0));
    p.h_threshold = 1.0 / p.c_n;
    const double net_formula = std::cbrt(p.eps_n) * std::pow(p.delta_n, 2.0 / 3.0) /
                               (p.c_n * p.c_n);
    p.net_eps = std::max(net_formula, budget_floor(p.eps_n, p.net_budget));
    p.net_on_astar = false;
    return p;
}

EventParams neg_params(const RadialMeasure& mu, std::size_t n, double ell_n) {
    const double alpha = mu.alpha();
    if (alpha >= 0.0 || alpha <= -1.0)
        throw std::domain_error("neg_params: requires -1 < alpha < 0");
    EventParams p;
    p.alpha = alpha;
    p.ell_n = ell_n > 0.0 ? ell_n : default_slow_sequence(n);
    p.c_n = p.ell_n;
    p.delta = 0.5 * (-alpha);  // midpoint of (0, -alpha) from Theorem 2.5
    const double nd = static_cast<double>(n);
    const double logn = std::log(nd);
    const double ap1 = alpha + 1.0;

    p.eps_n = std::min(std::pow(nd, -0.5 / ap1), kMaxAnnulusWidth);
    const double delta_formula = logn * std::pow(nd, -(alpha + 3.0) / (4.0 * ap1));
    p.delta_n = std::min({delta_formula, p.eps_n / 2.0,
                          calibrated_separation(mu, n, p.eps_n, p.c_n)});
    p.eps_star_n = std::min(std::pow(p.ell_n * p.ell_n / nd, 1.0 / ap1),
                            kMaxAnnulusWidth);
    p.delta_star_n = std::pow(p.ell_n, -3.0) * std::pow(nd, -0.5 / ap1);
    p.astar_outer = 1.0 - p.eps_star_n * std::pow(p.ell_n, -3.0 / ap1);
    p.radial_sep = std::pow(1.0 / (nd * std::pow(p.ell_n, 3.0)), 1.0 / ap1);
    p.h_threshold = std::pow(p.ell_n, -4.0 / ap1) * std::pow(nd, alpha / ap1);
    const double net_formula =
        std::pow(p.ell_n, -6.0) * std::pow(nd, -(1.0 - 3.0 * alpha) / (2.0 * ap1));
    const double astar_width = p.eps_star_n - (1.0 - p.astar_outer);
    p.net_eps = std::max(net_formula, budget_floor(astar_width, p.net_budget));
    p.net_on_astar = true;
    return p;
}

EventParams default_event_params(const RadialMeasure& mu, std::size_t n) {
    return mu.alpha() >= 0.0 ? many_pair_params(mu, n) : neg_params(mu, n);
}

double sup_net_deviation(const RootSample& sample, const RadialMeasure& mu,
                         const Net& net) {
    double sup = 0.0;
    for (const cplx& z : net.points)
        sup = std::max(sup, std::abs(discrete_transform(sample, z) - stieltjes(mu, z)));
    return sup;
}

EventFlags event_flags(const RootSample& sample, const RadialMeasure& mu,
                       const EventParams& p) {
    if (p.eps_n <= 0.0 || p.delta_n <= 0.0 || p.c_n <= 0.0 || p.ell_n <= 0.0)
        throw std::invalid_argument("event_flags: parameters must be positive");
    EventFlags flags;
    flags.parameters = p;
    const std::size_t n = sample.n;
    const double nd = static_cast<double>(n);
    const auto& roots = sample.roots;
    const double alpha = p.alpha;

    const double ab_inner = 1.0 - 2.0 * p.eps_n;  // A_n union B_n
    const double astar_inner = 1.0 - p.eps_star_n;

    std::vector<double> moduli(n);
    for (std::size_t i = 0; i < n; ++i) moduli[i] = std::abs(roots[i]);

    // E_n: too many roots near the edge.
    std::size_t edge_count = 0;
    for (double m : moduli)
        if (m >= ab_inner) ++edge_count;
    flags.e_n = static_cast<double>(edge_count) >
                3.0 * mu.C_mu() * nd * std::pow(2.0 * p.eps_n, alpha + 1.0);

    // F_n / F*_n separation scans via grid bucketing.
    {
        Grid grid;
        grid.insert(roots, std::max(p.delta_n, 1e-12));
        for (std::size_t i = 0; i < n && !flags.f_n; ++i) {
            if (moduli[i] < ab_inner) continue;
            grid.for_neighbors(roots[i], [&](std::size_t j) {
                if (j != i && std::abs(roots[i] - roots[j]) <= p.delta_n)
                    flags.f_n = true;
            });
        }
    }
    {
        Grid grid;
        grid.insert(roots, std::max(p.delta_star_n, 1e-12));
        for (std::size_t i = 0; i < n && !flags.f_star_n; ++i) {
            if (moduli[i] < astar_inner || moduli[i] > p.astar_outer) continue;
            grid.for_neighbors(roots[i], [&](std::size_t j) {
                if (j != i && std::abs(roots[i] - roots[j]) <= p.delta_star_n)
                    flags.f_star_n = true;
            });
        }
        if (alpha <= 0.0 && !flags.f_star_n) {
            // Clustering branch of F*_n: too many roots within eps_n of a
            // root in A*_n.
            const double limit =
                std::pow(p.c_n, 3.0) * nd * std::pow(p.eps_n, alpha + 2.0);
            Grid wide;
            wide.insert(roots, p.eps_n);
            for (std::size_t i = 0; i < n && !flags.f_star_n; ++i) {
                if (moduli[i] < astar_inner || moduli[i] > p.astar_outer) continue;
                std::size_t close = 0;
                wide.for_neighbors(roots[i], [&](std::size_t j) {
                    if (j != i && std::abs(roots[i] - roots[j]) < p.eps_n) ++close;
                });
                if (static_cast<double>(close) > limit) flags.f_star_n = true;
            }
        }
    }

    // F-parallel: radial separation of the A*_n roots.  The closest modulus
    // to any |X_i| is adjacent in sorted order, so adjacent gaps suffice.
    {
        std::vector<double> sorted = moduli;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
            if (sorted[k + 1] - sorted[k] > p.radial_sep) continue;
            const bool a_in = sorted[k] >= astar_inner && sorted[k] <= p.astar_outer;
            const bool b_in = sorted[k + 1] >= astar_inner && sorted[k + 1] <= p.astar_outer;
            if (a_in || b_in) { flags.f_parallel_n = true; break; }
        }
    }

    // G_n: interior roots too close to the annulus on average.
    {
        double acc = 0.0;
        const double ref = 1.0 - 1.5 * p.eps_n;
        for (double m : moduli) {
            if (m >= ab_inner) continue;
            const double t = ref - m;
            acc += 1.0 / (t * t);
        }
        const double bound = alpha >= 0.0
                                 ? nd * p.c_n * std::max(std::pow(p.eps_n, alpha - 1.0),
                                                         1.0 / p.eps_n)
                                 : nd * p.ell_n * std::pow(p.eps_n, alpha - 1.0);
        flags.g_n = acc >= bound;
    }

    // H_n: truncated discrete transform far from m_mu somewhere on the net.
    {
        const double r1 = p.net_on_astar ? astar_inner : 1.0 - p.eps_n;
        const double r2 = p.net_on_astar ? p.astar_outer : 1.0;
        const double eps_net = std::min(p.net_eps, (r2 - 1e-12) / 2.0);
        if (r1 > 0.0 && r1 < r2 && eps_net > 0.0) {
            const Net net = build_net(r1, r2, eps_net);
            const double half_delta = p.delta_n / 2.0;
            for (const cplx& z : net.points) {
                cplx acc{};
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx d = z - roots[j];
                    if (std::abs(d) > half_delta) acc += 1.0 / d;
                }
                acc /= nd;
                if (std::abs(acc - stieltjes(mu, z)) >= p.h_threshold) {
                    flags.h_n = true;
                    break;
                }
            }
        }
    }
    return flags;
}

} // namespace critpairs
