#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "critpairs/hessenberg.hpp"
#include "critpairs/matching.hpp"
#include "critpairs/measures.hpp"
#include "critpairs/poly_core.hpp"
#include "critpairs/rng.hpp"

using namespace critpairs;

namespace {

constexpr double kPi = std::numbers::pi;

RootSample make_sample(std::vector<cplx> roots, double alpha = 0.0) {
    RootSample s;
    s.n = roots.size();
    s.roots = std::move(roots);
    s.alpha = alpha;
    return s;
}

double matched_max_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    REQUIRE(a.size() == b.size());
    const std::size_t m = a.size();
    std::vector<std::vector<double>> cost(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) cost[i][j] = std::abs(a[i] - b[j]);
    const auto assignment = hungarian(cost);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, cost[i][assignment[i]]);
    return worst;
}

} // namespace

TEST_CASE("log derivative sums on known configurations") {
    {
        const std::vector<cplx> roots = {{1, 0}, {-1, 0}};
        const auto [s1, s2] = log_derivative_sums(roots, {0, 0});
        CHECK(std::abs(s1) < 1e-15);
        CHECK(s2.real() == doctest::Approx(2.0));
        CHECK(s2.imag() == doctest::Approx(0.0));
    }
    {
        const std::vector<cplx> roots = {{1, 0}, {2, 0}, {3, 0}};
        const auto [s1, s2] = log_derivative_sums(roots, {0, 0});
        CHECK(s1.real() == doctest::Approx(-11.0 / 6.0).epsilon(1e-14));
        CHECK(s2.real() == doctest::Approx(49.0 / 36.0).epsilon(1e-14));
    }
    {
        std::vector<cplx> roots(8);
        for (int k = 0; k < 8; ++k) roots[k] = std::polar(1.0, 2.0 * kPi * k / 8.0);
        const auto [s1, s2] = log_derivative_sums(roots, {0, 0});
        CHECK(std::abs(s1) < 1e-14);
        (void)s2;
    }
    {
        const std::vector<cplx> roots = {{1, 0}, {2, 0}};
        try {
            (void)log_derivative_sums(roots, {2, 0});
            FAIL("expected PoleError");
        } catch (const PoleError& e) {
            CHECK(e.index == 1);
        }
    }
}

TEST_CASE("critical points of small known polynomials") {
    {
        const auto cps = critical_points(make_sample({{1, 0}, {-1, 0}}));
        REQUIRE(cps.points.size() == 1);
        CHECK(std::abs(cps.points[0]) < 1e-12);
    }
    {
        // p = z(z-1)(z-3), p' = 3z^2 - 8z + 3, zeros (4 +- sqrt(7))/3
        const auto cps = critical_points(make_sample({{0, 0}, {1, 0}, {3, 0}}));
        std::vector<double> re = {cps.points[0].real(), cps.points[1].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx((4.0 - std::sqrt(7.0)) / 3.0).epsilon(1e-12));
        CHECK(re[1] == doctest::Approx((4.0 + std::sqrt(7.0)) / 3.0).epsilon(1e-12));
    }
    {
        const auto cps = critical_points(make_sample({{1, 0}, {2, 0}, {3, 0}}));
        std::vector<double> re = {cps.points[0].real(), cps.points[1].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(2.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(re[1] == doctest::Approx(2.0 + 1.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate input and bad tolerance are rejected") {
    CHECK_THROWS_AS((void)critical_points(make_sample({{0.5, 0.5}, {0.5, 0.5 + 1e-15}, {0, 0}})),
                    DegenerateInputError);
    SolverOptions opts;
    opts.tol = 1e-14;
    CHECK_THROWS_AS((void)critical_points(make_sample({{1, 0}, {-1, 0}}), opts),
                    std::invalid_argument);
}

TEST_CASE("certified identities on random samples") {
    for (double alpha : {1.0, 0.0, -0.05}) {
        const auto mu = RadialMeasure::power_law(alpha);
        for (std::size_t n : {16ul, 128ul, 1024ul}) {
            RngStream stream = RngStream::from(71, n, static_cast<std::uint64_t>(alpha * 100 + 200));
            const auto sample = sample_roots(mu, n, stream);
            const auto cps = critical_points(sample);
            REQUIRE(cps.points.size() == n - 1);
            const auto rep = verify_identities(sample, cps);
            CHECK(rep.max_residual <= 1e-9);
            CHECK(rep.sum_error <= 1e-9 * static_cast<double>(n));
            CHECK(rep.hull_excess <= 1e-9);
            CHECK(rep.max_glpair_error <= 1e-8);
        }
    }
}

TEST_CASE("permutation invariance of the critical set") {
    const auto mu = RadialMeasure::power_law(0.0);
    RngStream stream = RngStream::from(73, 64, 0);
    const auto sample = sample_roots(mu, 64, stream);
    auto shuffled = sample;
    RngStream perm_rng(99);
    for (std::size_t i = shuffled.roots.size(); i-- > 1;) {
        const std::size_t j = perm_rng.next_u64() % (i + 1);
        std::swap(shuffled.roots[i], shuffled.roots[j]);
    }
    const auto a = critical_points(sample);
    const auto b = critical_points(shuffled);
    CHECK(matched_max_distance(a.points, b.points) < 1e-9);
}

TEST_CASE("solver handles a tight edge cluster") {
    const auto mu = RadialMeasure::power_law(0.0);
    RngStream stream = RngStream::from(79, 32, 0);
    auto sample = sample_roots(mu, 32, stream);
    sample.roots[0] = std::polar(0.95, 0.1);
    sample.roots[1] = sample.roots[0] + cplx(1e-6, 1e-6);
    sample.n = sample.roots.size();
    const auto cps = critical_points(sample);
    const auto rep = verify_identities(sample, cps);
    CHECK(rep.max_residual <= 1e-9);
}

TEST_CASE("companion oracle on known polynomials and size limit") {
    {
        const auto cps = companion_oracle(make_sample({{1, 0}, {-1, 0}}));
        REQUIRE(cps.points.size() == 1);
        CHECK(std::abs(cps.points[0]) < 1e-12);
        CHECK(cps.method == SolverMethod::kCompanionOracle);
    }
    {
        const auto cps = companion_oracle(make_sample({{1, 0}, {2, 0}, {3, 0}}));
        std::vector<double> re = {cps.points[0].real(), cps.points[1].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(2.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(re[1] == doctest::Approx(2.0 + 1.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
    std::vector<cplx> big(129);
    RngStream rng(1);
    for (auto& r : big) r = std::polar(rng.uniform01(), rng.uniform(-kPi, kPi));
    CHECK_THROWS_AS((void)companion_oracle(make_sample(std::move(big))), std::length_error);
}

TEST_CASE("oracle equivalence at moderate degree") {
    for (double alpha : {1.0, 0.0, -0.05}) {
        const auto mu = RadialMeasure::power_law(alpha);
        for (std::size_t n : {8ul, 32ul, 64ul}) {
            for (std::uint64_t t = 0; t < 5; ++t) {
                RngStream stream = RngStream::from(83, n, t + static_cast<std::uint64_t>(alpha * 50 + 100));
                const auto sample = sample_roots(mu, n, stream);
                const auto a = critical_points(sample);
                const auto b = companion_oracle(sample);
                CHECK(matched_max_distance(a.points, b.points) <= 1e-8);
            }
        }
    }
}

TEST_CASE("hessenberg qr on a perfectly conditioned companion") {
    const std::size_t m = 64;
    // companion of z^m - 1: eigenvalues are the m-th roots of unity
    std::vector<cplx> h(m * m, cplx(0, 0));
    for (std::size_t i = 1; i < m; ++i) h[i * m + i - 1] = 1.0;
    h[0 * m + (m - 1)] = 1.0;
    const auto eigs = hessenberg_eigenvalues(std::move(h), m);
    REQUIRE(eigs.size() == m);
    for (const cplx& e : eigs) {
        double best = 1e300;
        for (std::size_t k = 0; k < m; ++k)
            best = std::min(best, std::abs(e - std::polar(1.0, 2.0 * kPi * k / m)));
        CHECK(best < 1e-12);
    }
}

TEST_CASE("rotation equivariance of the solver") {
    const auto mu = RadialMeasure::power_law(1.0);
    RngStream stream = RngStream::from(89, 64, 0);
    const auto sample = sample_roots(mu, 64, stream);
    const cplx rot = std::polar(1.0, 0.913);
    auto rotated = sample;
    for (auto& r : rotated.roots) r *= rot;
    const auto a = critical_points(sample);
    const auto b = critical_points(rotated);
    std::vector<cplx> a_rotated(a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) a_rotated[i] = a.points[i] * rot;
    CHECK(matched_max_distance(a_rotated, b.points) < 1e-9);
}
