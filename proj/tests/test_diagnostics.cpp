#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "critpairs/diagnostics.hpp"
#include "critpairs/measures.hpp"
#include "critpairs/rng.hpp"

using namespace critpairs;

namespace {
constexpr double kPi = std::numbers::pi;

// Brute-force versions of the separation events for cross-checking.
bool brute_f(const std::vector<cplx>& roots, double inner, double sep) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (std::abs(roots[i]) < inner) continue;
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (j != i && std::abs(roots[i] - roots[j]) <= sep) return true;
    }
    return false;
}
} // namespace

TEST_CASE("net construction obeys the size and separation bounds") {
    {
        const Net net = build_net(0.8, 1.0, 0.1);
        CHECK(static_cast<double>(net.points.size()) <= 22.0 / (0.1 * 0.1) * 1.0 * 0.2);
        CHECK(net.separation == doctest::Approx(0.1 * 0.8 / 2.0));
        double min_gap = 1e300;
        for (std::size_t i = 0; i < net.points.size(); ++i)
            for (std::size_t j = i + 1; j < net.points.size(); ++j)
                min_gap = std::min(min_gap, std::abs(net.points[i] - net.points[j]));
        CHECK(min_gap > net.separation);
        CHECK(min_gap > 0.04);
    }
    {
        // eps > r2 - r1 switches to the two-circle construction
        const Net net = build_net(0.99, 1.0, 0.05);
        CHECK(static_cast<double>(net.points.size()) <= 18.0 / 0.05);
        CHECK(net.points.size() <= 360);
    }
    CHECK_THROWS_AS((void)build_net(1.0, 0.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_net(0.5, 1.0, 0.6), std::invalid_argument);
}

TEST_CASE("net covers the annulus") {
    for (const auto& [r1, r2, eps] : {std::tuple{0.8, 1.0, 0.1}, {0.99, 1.0, 0.05},
                                      {0.5, 0.9, 0.17}}) {
        const Net net = build_net(r1, r2, eps);
        RngStream rng(314);
        for (int k = 0; k < 10000; ++k) {
            const cplx z = std::polar(rng.uniform(r1, r2), rng.uniform(-kPi, kPi));
            double best = 1e300;
            for (const cplx& p : net.points) best = std::min(best, std::abs(z - p));
            CHECK(best <= eps + 1e-12);
        }
    }
}

TEST_CASE("discrete transform excludes exactly the nearest root") {
    RootSample s;
    s.n = 2;
    s.roots = {{1, 0}, {-1, 0}};
    CHECK(discrete_transform(s, {0.9, 0.0}).real() ==
          doctest::Approx(0.5 / 1.9).epsilon(1e-14));
    // tie at z = 0: the min-index root (index 0) is excluded
    CHECK(discrete_transform(s, {0.0, 0.0}).real() == doctest::Approx(0.5).epsilon(1e-14));

    RootSample dup;
    dup.n = 3;
    dup.roots = {{1, 0}, {1, 0}, {0, 0}};
    CHECK_THROWS_AS((void)discrete_transform(dup, {1.0, 0.0}), DegenerateInputError);
}

TEST_CASE("truncated and untruncated transforms agree when roots are isolated") {
    const auto mu = RadialMeasure::power_law(1.0);
    RngStream stream = RngStream::from(21, 256, 0);
    const auto sample = sample_roots(mu, 256, stream);
    RngStream zrng(5);
    for (int k = 0; k < 50; ++k) {
        const cplx z = std::polar(zrng.uniform(0.8, 1.0), zrng.uniform(-kPi, kPi));
        const double delta = 0.02;
        std::size_t close = 0;
        for (const cplx& x : sample.roots)
            if (std::abs(z - x) <= delta / 2.0) ++close;
        if (close > 1) continue;
        cplx truncated{};
        for (const cplx& x : sample.roots)
            if (std::abs(z - x) > delta / 2.0) truncated += 1.0 / (z - x);
        truncated /= static_cast<double>(sample.n);
        const cplx full = discrete_transform(sample, z);
        CHECK(std::abs(full - truncated) <=
              (1.0 / static_cast<double>(sample.n)) * (2.0 / delta) + 1e-12);
    }
}

TEST_CASE("parameter presets stay inside the lemma hypotheses") {
    for (double alpha : {2.0, 1.0, 0.5, 0.0}) {
        const auto mu = RadialMeasure::power_law(alpha);
        for (std::size_t n : {64ul, 1024ul, 4096ul, 65536ul}) {
            for (const EventParams& p :
                 {many_pair_params(mu, n), max_pair_params(mu, n)}) {
                CHECK(p.eps_n > 0.0);
                CHECK(p.delta_n > 0.0);
                CHECK(p.delta_n <= p.eps_n / 2.0);
                CHECK(p.eps_star_n > 0.0);
                CHECK(p.delta_star_n > 0.0);
                CHECK(p.h_threshold > 0.0);
                CHECK(p.net_eps > 0.0);
            }
        }
    }
    for (double alpha : {-0.05, -0.09}) {
        const auto mu = RadialMeasure::power_law(alpha);
        for (std::size_t n : {1024ul, 4096ul}) {
            const EventParams p = neg_params(mu, n);
            CHECK(p.delta_n <= p.eps_n / 2.0);
            CHECK(p.astar_outer < 1.0);
            CHECK(p.astar_outer > 1.0 - p.eps_star_n);
            CHECK(p.net_on_astar);
        }
    }
    CHECK_THROWS_AS((void)neg_params(RadialMeasure::power_law(1.0), 64), std::domain_error);
    CHECK_THROWS_AS((void)many_pair_params(RadialMeasure::power_law(-0.05), 64),
                    std::domain_error);
}

TEST_CASE("event flags: small configurations far from the edge") {
    const auto mu = RadialMeasure::power_law(1.0);
    RootSample s;
    s.n = 2;
    s.alpha = 1.0;
    s.roots = {{0.1, 0.0}, {-0.1, 0.0}};
    const auto p = many_pair_params(mu, 2);
    const auto flags = event_flags(s, mu, p);
    CHECK_FALSE(flags.e_n);
    CHECK_FALSE(flags.f_n);
    CHECK_FALSE(flags.f_star_n);
    CHECK_FALSE(flags.f_parallel_n);
}

TEST_CASE("planted separation violation trips f_n") {
    const auto mu = RadialMeasure::power_law(1.0);
    RngStream stream = RngStream::from(33, 256, 0);
    auto sample = sample_roots(mu, 256, stream);
    const auto p = many_pair_params(mu, 256);
    // plant a root inside A_n and a partner at distance delta_n/2
    sample.roots[0] = std::polar(1.0 - p.eps_n / 2.0, 0.3);
    sample.roots[1] = sample.roots[0] + cplx(p.delta_n / 2.0, 0.0);
    const auto flags = event_flags(sample, mu, p);
    CHECK(flags.f_n);
}

TEST_CASE("bucketed separation scans agree with brute force") {
    for (double alpha : {1.0, 0.0}) {
        const auto mu = RadialMeasure::power_law(alpha);
        for (std::uint64_t t = 0; t < 20; ++t) {
            RngStream stream = RngStream::from(51, 512, t);
            const auto sample = sample_roots(mu, 512, stream);
            auto p = many_pair_params(mu, 512);
            // widen the scales so the events actually fire sometimes
            p.delta_n = std::min(0.3 * p.eps_n, 8.0 * p.delta_n);
            p.delta_star_n *= 4.0;
            const auto flags = event_flags(sample, mu, p);
            CHECK(flags.f_n == brute_f(sample.roots, 1.0 - 2.0 * p.eps_n, p.delta_n));
            CHECK(flags.f_star_n ==
                  brute_f(sample.roots, 1.0 - p.eps_star_n, p.delta_star_n));
        }
    }
}

TEST_CASE("discrete transform tracks the stieltjes transform on the net") {
    // reduced-size surrogate of the sup-deviation diagnostic
    const auto mu = RadialMeasure::power_law(1.0);
    std::size_t hits = 0;
    const std::size_t trials = 20;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream stream = RngStream::from(61, 1024, t);
        const auto sample = sample_roots(mu, 1024, stream);
        auto p = many_pair_params(mu, 1024, -1.0, 8.0);
        const double budget_eps = std::sqrt(22.0 * p.eps_n / 20000.0);
        const Net net = build_net(1.0 - p.eps_n, 1.0, std::max(p.net_eps, budget_eps));
        const double sup = sup_net_deviation(sample, mu, net);
        if (sup <= 0.25) ++hits;
    }
    CHECK(hits >= trials * 9 / 10);
}

TEST_CASE("empirical lipschitz surrogate for the discrete transform") {
    const auto mu = RadialMeasure::power_law(1.0);
    const std::size_t n = 256;
    const auto p = many_pair_params(mu, n, -1.0, 8.0);
    RngStream zrng(8);
    std::size_t checked = 0;
    for (std::uint64_t t = 0; t < 40 && checked < 10; ++t) {
        RngStream stream = RngStream::from(71, n, t);
        const auto sample = sample_roots(mu, n, stream);
        const auto flags = event_flags(sample, mu, p);
        if (flags.f_n || flags.g_n || flags.e_n) continue;
        // find a root in A_n
        std::size_t idx = n;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(sample.roots[i]) >= 1.0 - p.eps_n) { idx = i; break; }
        if (idx == n) continue;
        ++checked;
        const double bound =
            p.c_n * std::max(std::pow(p.eps_n, p.alpha - 1.0), 1.0 / p.eps_n) +
            172.0 * std::log(static_cast<double>(n)) /
                (static_cast<double>(n) * p.delta_n * p.delta_n);
        for (int k = 0; k < 20; ++k) {
            const cplx dz1 = std::polar(zrng.uniform01() * p.delta_n / 2.0,
                                        zrng.uniform(-kPi, kPi));
            const cplx dz2 = std::polar(zrng.uniform01() * p.delta_n / 2.0,
                                        zrng.uniform(-kPi, kPi));
            const cplx z = sample.roots[idx] + dz1;
            const cplx w = sample.roots[idx] + dz2;
            const cplx mz = discrete_transform(sample, z);
            const cplx mw = discrete_transform(sample, w);
            CHECK(std::abs(mz - mw) <= std::abs(z - w) * bound + 1e-9);
        }
    }
    CHECK(checked > 0);
}
