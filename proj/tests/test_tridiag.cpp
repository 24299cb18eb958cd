#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "qpwave/errors.hpp"
#include "qpwave/tridiag.hpp"

using namespace qpwave;
using cd = std::complex<double>;

namespace {

std::vector<std::vector<cd>> dense_of(const linalg::TwistedTridiagonal& m) {
    const int n = m.size();
    std::vector<std::vector<cd>> out(static_cast<std::size_t>(n),
                                     std::vector<cd>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = m.diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] = m.upper[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)] = m.lower[static_cast<std::size_t>(i)];
        }
    }
    out[0][static_cast<std::size_t>(n - 1)] += m.corner_top;
    out[static_cast<std::size_t>(n - 1)][0] += m.corner_bottom;
    return out;
}

cd random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("solve_twisted matches dense LU on 200 random systems, n = 32") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 32;
        linalg::TwistedTridiagonal m;
        m.diag.resize(n);
        m.lower.resize(n - 1);
        m.upper.resize(n - 1);
        for (int i = 0; i < n; ++i) m.diag[static_cast<std::size_t>(i)] = random_unit(rng) + cd(3.0, 0.0);
        for (int i = 0; i < n - 1; ++i) {
            m.lower[static_cast<std::size_t>(i)] = random_unit(rng);
            m.upper[static_cast<std::size_t>(i)] = random_unit(rng);
        }
        m.corner_top = random_unit(rng);
        m.corner_bottom = random_unit(rng);
        std::vector<cd> rhs(n);
        for (auto& z : rhs) z = random_unit(rng);

        const auto fast = linalg::solve_twisted(m, rhs);
        const auto dense = oracles::dense_solve(dense_of(m), rhs);
        double err = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            err = std::max(err, std::abs(fast[static_cast<std::size_t>(i)] - dense[static_cast<std::size_t>(i)]));
            scale = std::max(scale, std::abs(dense[static_cast<std::size_t>(i)]));
        }
        CHECK(err <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("solve_twisted handles rows that require pivoting") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 24;
        linalg::TwistedTridiagonal m;
        m.diag.assign(n, cd(0.01, 0.0));  // weak diagonal
        m.lower.resize(n - 1);
        m.upper.resize(n - 1);
        for (int i = 0; i < n - 1; ++i) {
            m.lower[static_cast<std::size_t>(i)] = random_unit(rng) + cd(2.0, 0.0);
            m.upper[static_cast<std::size_t>(i)] = random_unit(rng) + cd(0.0, 2.0);
        }
        m.corner_top = 0.3;
        m.corner_bottom = cd(0.0, -0.2);
        std::vector<cd> rhs(n);
        for (auto& z : rhs) z = random_unit(rng);
        const auto fast = linalg::solve_twisted(m, rhs);
        const auto dense = oracles::dense_solve(dense_of(m), rhs);
        double err = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            err = std::max(err, std::abs(fast[static_cast<std::size_t>(i)] - dense[static_cast<std::size_t>(i)]));
            scale = std::max(scale, std::abs(dense[static_cast<std::size_t>(i)]));
        }
        CHECK(err <= 1e-11 * std::max(1.0, scale));
    }
}

TEST_CASE("solve_twisted reproduces the twisted operator structures") {
    // Matrices of the two production shapes: I - dt D2 - dt b diag(w), and
    // (1 - mu) I - i omega D1, both with twisted corners.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> utheta(0.0, 6.28);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 32;
        const double theta = utheta(rng);
        const double dx = 0.21, dt = 1e-3;
        const cd twist = std::polar(1.0, theta);
        const double c = dt / (dx * dx);

        linalg::TwistedTridiagonal lap;
        lap.diag.assign(n, 0.0);
        lap.lower.assign(n - 1, -c);
        lap.upper.assign(n - 1, -c);
        std::uniform_real_distribution<double> uw(0.0, 2.0);
        for (int i = 0; i < n; ++i) lap.diag[static_cast<std::size_t>(i)] = 1.0 + 2.0 * c - dt * uw(rng);
        lap.corner_top = -c / twist;
        lap.corner_bottom = -c * twist;

        std::vector<cd> rhs(n);
        for (auto& z : rhs) z = random_unit(rng);
        auto fast = linalg::solve_twisted(lap, rhs);
        auto dense = oracles::dense_solve(dense_of(lap), rhs);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(fast[static_cast<std::size_t>(i)] - dense[static_cast<std::size_t>(i)]) <= 1e-12);
        }

        linalg::TwistedTridiagonal transp;
        const cd off = cd(0.0, -3e-3) / (2.0 * dx);
        transp.diag.assign(n, 1.0 - 2e-3);
        transp.upper.assign(n - 1, off);
        transp.lower.assign(n - 1, -off);
        transp.corner_top = -off / twist;
        transp.corner_bottom = off * twist;
        fast = linalg::solve_twisted(transp, rhs);
        dense = oracles::dense_solve(dense_of(transp), rhs);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(fast[static_cast<std::size_t>(i)] - dense[static_cast<std::size_t>(i)]) <= 1e-12);
        }
    }
}

TEST_CASE("solve_twisted reports singular systems") {
    linalg::TwistedTridiagonal m;
    m.diag.assign(8, 0.0);
    m.lower.assign(7, 0.0);
    m.upper.assign(7, 0.0);
    std::vector<cd> rhs(8, 1.0);
    CHECK_THROWS_AS(linalg::solve_twisted(m, rhs), SolverFailure);

    // Size mismatch and too-small systems.
    linalg::TwistedTridiagonal ok;
    ok.diag.assign(8, 2.0);
    ok.lower.assign(7, 1.0);
    ok.upper.assign(7, 1.0);
    CHECK_THROWS_AS(linalg::solve_twisted(ok, std::vector<cd>(5, 1.0)), DomainError);
}
