#include <doctest.h>

#include <cmath>
#include <complex>

#include "slq/errors.hpp"
#include "slq/ivp.hpp"

#include "helpers.hpp"

using namespace slq;
using slqtest::kPi;
using namespace std::complex_literals;

TEST_SUITE_BEGIN("ivp");

TEST_CASE("free problem, z = 4: sin/cos closed form") {
    auto pr = slqtest::free_problem(0.0, kPi);
    auto t = integrate(pr, 4.0, {0.0, 0.0, 1.0}, kPi);
    // u = sin(2x)/2, u^[1] = cos(2x)
    CHECK(std::abs(t.u(kPi / 4) - 0.5) <= 1e-10);
    CHECK(std::abs(t.u1(kPi / 4) - 0.0) <= 1e-10);
    for (double x : {0.3, 1.1, 2.2, 3.0}) {
        CHECK(std::abs(t.u(x) - std::sin(2 * x) / 2.0) <= 1e-10);
        CHECK(std::abs(t.u1(x) - std::cos(2 * x)) <= 1e-10);
    }
}

TEST_CASE("constant solution at z = 0") {
    auto pr = slqtest::free_problem(0.0, kPi);
    auto t = integrate(pr, 0.0, {0.0, 1.0, 0.0}, kPi);
    for (double x : {0.0, 0.7, 1.9, kPi}) {
        CHECK(std::abs(t.u(x) - 1.0) <= 1e-12);
        CHECK(std::abs(t.u1(x)) <= 1e-12);
    }
}

TEST_CASE("delta interaction: quasi-derivative absorbs the jump") {
    // s = step at c, q = -s^2, z = 0, (u, u^[1]) = (0,1) at 0:
    // u(x) = x below c, then u(x) = c + (1-c)(x-c).
    const double c = kPi / 2;
    auto pr = slqtest::delta_problem(c);
    auto t = integrate(pr, 0.0, {0.0, 0.0, 1.0}, kPi);
    const double expected = c + (1.0 - c) * (kPi - c);
    CHECK(std::abs(t.u(kPi) - expected) <= 1e-10);
    // two-piece closed form at interior points on both sides of c
    CHECK(std::abs(t.u(1.0) - 1.0) <= 1e-10);
    CHECK(std::abs(t.u(2.5) - (c + (1.0 - c) * (2.5 - c))) <= 1e-10);
    // u and u^[1] are continuous across the jump
    CHECK(std::abs(t.u(c - 1e-9) - t.u(c + 1e-9)) <= 1e-7);
    CHECK(std::abs(t.u1(c - 1e-9) - t.u1(c + 1e-9)) <= 1e-7);
}

TEST_CASE("fundamental system: normalization and Wronskian constancy") {
    auto pr = slqtest::free_problem(0.0, kPi);
    SUBCASE("z = 1 gives cos and sin") {
        auto [th, ph] = fundamental_system(pr, 1.0, 0.0);
        for (double x : {0.5, 1.5, 2.5}) {
            CHECK(std::abs(th.u(x) - std::cos(x)) <= 1e-10);
            CHECK(std::abs(ph.u(x) - std::sin(x)) <= 1e-10);
        }
    }
    SUBCASE("W = 1 at random points, complex z") {
        const Complex z = 2.0 + 1.5i;
        auto [u1, u2] = fundamental_system(pr, z, 1.0);
        for (int i = 0; i < 5; ++i) {
            const double x = slqtest::uniform(0.0, kPi);
            CHECK(std::abs(wronskian(u1, u2, x) - 1.0) <= 1e-10);
        }
    }
    SUBCASE("real z, real data: trajectories stay real") {
        auto [u1, u2] = fundamental_system(slqtest::smooth_problem(), -2.5, 0.4);
        for (int i = 0; i < 5; ++i) {
            const double x = slqtest::uniform(0.0, 1.0);
            CHECK(std::abs(u1.u(x).imag()) <= 1e-14);
            CHECK(std::abs(u2.u(x).imag()) <= 1e-14);
        }
    }
}

TEST_CASE("Wronskian identities") {
    auto pr = slqtest::smooth_problem();
    auto [u1, u2] = fundamental_system(pr, 3.0, 0.5);

    SUBCASE("antisymmetry") {
        CHECK(std::abs(wronskian(u1, u1, 0.3)) <= 1e-12);
    }

    SUBCASE("x-independence across the interval") {
        const Complex w0 = wronskian(u1, u2, 0.0);
        double worst = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double x = i / 64.0;
            worst = std::max(worst, std::abs(wronskian(u1, u2, x) - w0));
        }
        CHECK(worst <= 1e-9 * (1.0 + std::abs(w0)));
    }

    SUBCASE("Lagrange identity for two spectral parameters") {
        const double z1 = 3.0, z2 = -1.0;
        auto f = solve_across(pr, z1, 0.5, 1.0, 0.25);
        auto g = solve_across(pr, z2, 0.5, -0.5, 1.0);
        const double alpha = 0.1, beta = 0.9;
        // tau f = z1 f, tau g = z2 g, so the Lagrange integrand is
        // (z1 - z2) f g r.
        const Complex integral = pr.quad_complex(
            [&](double x) { return (z1 - z2) * f.u(x) * g.u(x) * pr.r(x); }, alpha, beta,
            f.knots());
        const Complex diff = wronskian(f, g, beta) - wronskian(f, g, alpha);
        CHECK(std::abs(integral - diff) <= 1e-8);
    }
}

TEST_CASE("Pluecker identity") {
    auto pr = slqtest::smooth_problem();
    auto [u1, u2] = fundamental_system(pr, 1.0, 0.5);

    SUBCASE("random linear combinations at one z") {
        for (int i = 0; i < 3; ++i) {
            auto f1 = u1.combo(slqtest::uniform(-2, 2), u2, slqtest::uniform(-2, 2));
            auto f2 = u1.combo(slqtest::uniform(-2, 2), u2, slqtest::uniform(-2, 2));
            auto f3 = u1.combo(slqtest::uniform(-2, 2), u2, slqtest::uniform(-2, 2));
            auto f4 = u1.combo(slqtest::uniform(-2, 2), u2, slqtest::uniform(-2, 2));
            CHECK(plucker_residual(f1, f2, f3, f4, 0.7) <= 1e-9);
        }
    }

    SUBCASE("mixed spectral parameters") {
        auto f1 = solve_across(pr, 2.0, 0.5, 1.0, 0.0);
        auto f2 = solve_across(pr, -1.5, 0.5, 0.2, 1.0);
        auto f3 = solve_across(pr, 0.5, 0.5, 1.0, 1.0);
        auto f4 = solve_across(pr, 4.0, 0.5, -1.0, 0.5);
        CHECK(plucker_residual(f1, f2, f3, f4, 0.25) <= 1e-9);
    }

    SUBCASE("degenerate repetition cancels to machine precision") {
        auto f1 = solve_across(pr, 2.0, 0.5, 1.0, 0.5);
        auto f2 = solve_across(pr, -1.0, 0.5, 0.5, 1.0);
        auto f3 = solve_across(pr, 1.0, 0.5, 1.0, -1.0);
        CHECK(plucker_residual(f1, f2, f3, f1, 0.6) <= 1e-12);
    }
}

TEST_CASE("variation of parameters") {
    auto pr = slqtest::free_problem(0.0, 1.0);

    SUBCASE("zero inhomogeneity matches the homogeneous IVP") {
        auto f = variation_of_parameters(pr, 2.0, [](double) { return Complex(0); }, 0.0, 1.0,
                                         0.5);
        auto h = integrate(pr, 2.0, {0.0, 1.0, 0.5}, 1.0);
        for (double x : {0.2, 0.5, 0.9})
            CHECK(std::abs(f.u(x) - h.u(x)) <= 1e-10);
    }

    SUBCASE("free problem, z=0, g=1: f = -x^2/2") {
        auto f = variation_of_parameters(pr, 0.0, [](double) { return Complex(1); }, 0.0, 0.0,
                                         0.0);
        for (double x : {0.25, 0.5, 1.0})
            CHECK(std::abs(f.u(x) - (-x * x / 2.0)) <= 1e-10);
    }

    SUBCASE("cross validation against direct integration with g") {
        auto pr2 = slqtest::smooth_problem();
        auto g = [](double x) { return Complex(std::cos(2 * x), 0.1 * x); };
        auto f = variation_of_parameters(pr2, 1.5, g, 0.3, 0.7, -0.2);
        auto h = integrate(pr2, 1.5, {0.3, 0.7, -0.2}, 1.0, g);
        auto hl = integrate(pr2, 1.5, {0.3, 0.7, -0.2}, 0.0, g);
        for (double x : {0.05, 0.2, 0.45, 0.8, 1.0}) {
            const Complex ref = x < 0.3 ? hl.u(x) : h.u(x);
            CHECK(std::abs(f.u(x) - ref) <= 1e-9);
        }
    }

    SUBCASE("defining property recovered by finite differences") {
        // tau f - z f = g with tau f = (-(f^[1])' + s f^[1] + q f)/r
        auto pr2 = slqtest::smooth_problem();
        auto g = [](double x) { return Complex(1.0 + x); };
        const Complex z = 2.0;
        auto f = variation_of_parameters(pr2, z, g, 0.5, 0.3, 0.1);
        const double h = 1e-5;
        for (double x : {0.25, 0.5, 0.75}) {
            const Complex d1 = (f.u1(x + h) - f.u1(x - h)) / (2 * h);
            const Complex tauf = (-d1 + pr2.s(x) * f.u1(x) + pr2.q(x) * f.u(x)) / pr2.r(x);
            CHECK(std::abs(tauf - z * f.u(x) - g(x)) <= 1e-6);
        }
    }
}

TEST_CASE("transfer matrix") {
    auto pr = slqtest::free_problem(0.0, 1.0);

    SUBCASE("free problem closed form at lambda = pi^2") {
        auto T = transfer_matrix(pr, kPi * kPi);
        CHECK(std::abs(T.m.a11 - (-1.0)) <= 1e-9);
        CHECK(std::abs(T.m.a12) <= 1e-9);
        CHECK(std::abs(T.m.a21) <= 1e-9);
        CHECK(std::abs(T.m.a22 - (-1.0)) <= 1e-9);
    }

    SUBCASE("z = 0: solutions 1 and x") {
        auto T = transfer_matrix(pr, 0.0);
        CHECK(std::abs(T.m.a11 - 1.0) <= 1e-10);
        CHECK(std::abs(T.m.a12 - 1.0) <= 1e-10);
        CHECK(std::abs(T.m.a21) <= 1e-10);
        CHECK(std::abs(T.m.a22 - 1.0) <= 1e-10);
    }

    SUBCASE("det T = 1 for 20 random complex z") {
        auto pr2 = slqtest::smooth_problem();
        for (int i = 0; i < 20; ++i) {
            const Complex z(slqtest::uniform(-30, 30), slqtest::uniform(-10, 10));
            auto T = transfer_matrix(pr2, z);
            CHECK(std::abs(T.m.det() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("conjugation symmetry of trajectories") {
    auto pr = slqtest::smooth_problem();
    const Complex z = 1.7 + 2.3i;
    const Complex d1 = 0.4 - 0.2i, d2 = 1.1 + 0.6i;
    auto t = integrate(pr, z, {0.0, d1, d2}, 1.0);
    auto tc = integrate(pr, std::conj(z), {0.0, std::conj(d1), std::conj(d2)}, 1.0);
    for (int i = 0; i <= 16; ++i) {
        const double x = i / 16.0;
        CHECK(std::abs(tc.u(x) - std::conj(t.u(x))) <= 1e-10);
        CHECK(std::abs(tc.u1(x) - std::conj(t.u1(x))) <= 1e-10);
    }
}

TEST_CASE("order-1/2 growth in z of the fundamental system") {
    auto pr = slqtest::delta_problem();
    const double alpha = 0.4, beta = 2.6, c = 1.5;
    auto logmax = [&](double zmag) {
        auto [u1, u2] = fundamental_system(pr, Complex(-zmag, 0.0), c);
        double m = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double x = alpha + (beta - alpha) * i / 40.0;
            m = std::max(m, std::abs(u1.u(x)) + std::abs(u1.u1(x)));
        }
        return std::log(m);
    };
    const double l1 = logmax(1.0), l10 = logmax(10.0), l100 = logmax(100.0);
    // slope of log-max against sqrt|z| stays bounded (here by the interval
    // half width with margin), and does not blow up between decades
    const double s1 = (l10 - l1) / (std::sqrt(10.0) - 1.0);
    const double s2 = (l100 - l10) / (std::sqrt(100.0) - std::sqrt(10.0));
    CHECK(s2 <= 2.0 * (beta - alpha) + 1.0);
    CHECK(s2 <= std::max(2.0 * s1, s1 + 1.0));
}

TEST_CASE("solutions change sign at interior zeros") {
    auto pr = slqtest::smooth_problem();
    for (int i = 0; i < 4; ++i) {
        const double lam = slqtest::uniform(40.0, 160.0);
        auto t = solve_across(pr, lam, 0.0, 0.0, 1.0);
        // locate zeros by sign change and confirm opposite signs off the zero
        double prev = 0.02;
        double pv = t.u(prev).real();
        for (int k = 1; k <= 400; ++k) {
            const double x = 0.02 + (0.96 * k) / 400.0;
            const double v = t.u(x).real();
            if (pv != 0 && v != 0 && ((pv < 0) != (v < 0))) {
                // bisect to the zero
                double lo = prev, hi = x;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double vm = t.u(mid).real();
                    if ((vm < 0) == (pv < 0)) lo = mid;
                    else hi = mid;
                }
                const double x0 = 0.5 * (lo + hi);
                const double h = 1e-4;
                CHECK(t.u(x0 - h).real() * t.u(x0 + h).real() < 0.0);
            }
            prev = x;
            pv = v;
        }
    }
}

TEST_CASE("non-finite inputs are rejected") {
    auto pr = slqtest::free_problem(0.0, 1.0);
    CHECK_THROWS_AS(integrate(pr, 0.0, {0.0, 1.0, 0.0}, 2.0), Error);  // outside [a,b]
}

TEST_SUITE_END();
