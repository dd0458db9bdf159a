#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "slq/boundary.hpp"
#include "slq/problem.hpp"

namespace slqtest {

inline constexpr double kPi = std::numbers::pi;

// p = r = 1, q = s = 0 on (a,b): tau u = -u''.
inline slq::Problem free_problem(double a, double b) {
    using slq::PiecewiseFn;
    return slq::Problem(a, b, PiecewiseFn::constant(a, b, 1.0), PiecewiseFn::constant(a, b, 0.0),
                        PiecewiseFn::constant(a, b, 1.0), PiecewiseFn::constant(a, b, 0.0));
}

// Formal potential -delta at c on (0,pi): s = unit step at c, q = -s^2.
inline slq::Problem delta_problem(double c = kPi / 2) {
    using slq::Piece;
    using slq::PiecewiseFn;
    const double a = 0.0, b = kPi;
    PiecewiseFn s({Piece{a, c, slq::parse_expr("0")}, Piece{c, b, slq::parse_expr("1")}});
    PiecewiseFn q({Piece{a, c, slq::parse_expr("0")}, Piece{c, b, slq::parse_expr("-1")}});
    return slq::Problem(a, b, PiecewiseFn::constant(a, b, 1.0), std::move(q),
                        PiecewiseFn::constant(a, b, 1.0), std::move(s));
}

// Smooth nontrivial coefficients on (0,1), regular, p > 0, r > 0.
inline slq::Problem smooth_problem() {
    using slq::PiecewiseFn;
    const double a = 0.0, b = 1.0;
    return slq::Problem(a, b, PiecewiseFn::from_expr(a, b, slq::parse_expr("1 + x^2 / 2")),
                        PiecewiseFn::from_expr(a, b, slq::parse_expr("cos(3 * x)")),
                        PiecewiseFn::from_expr(a, b, slq::parse_expr("1 + x / 4")),
                        PiecewiseFn::from_expr(a, b, slq::parse_expr("sin(2 * x) / 3")));
}

inline slq::BoundaryCondition dirichlet() { return slq::SeparatedBC{0.0, 0.0}; }
inline slq::BoundaryCondition neumann() { return slq::SeparatedBC{kPi / 2, kPi / 2}; }
inline slq::BoundaryCondition periodic() { return slq::CoupledBC{0.0, slq::Mat2d::identity()}; }
inline slq::BoundaryCondition antiperiodic() {
    return slq::CoupledBC{0.0, slq::Mat2d{-1.0, 0.0, 0.0, -1.0}};
}

// Deterministic RNG for property tests.
inline std::mt19937& rng() {
    static std::mt19937 gen(20240811u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

} // namespace slqtest
