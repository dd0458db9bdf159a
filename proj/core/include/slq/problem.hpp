#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slq/piecewise.hpp"
#include "slq/quadrature.hpp"

namespace slq {

struct ProblemConfig {
    int validation_grid = 128;   // points per coefficient segment, capped overall
    QuadOptions quad{};          // abs tol 1e-12, max depth 40
};

// The data of the differential expression
//   tau f = ( -(f^[1])' + s f^[1] + q f ) / r,   f^[1] = p (f' + s f)
// on a finite interval (a,b): coefficients p,q,r,s as piecewise closed
// forms plus per-endpoint declared-singular flags. Construction validates
// r > 0 and p != 0 on a grid and, unless an endpoint is declared singular,
// that |1/p| + |q| + |r| + |s| is integrable.
class Problem {
public:
    Problem(double a, double b, PiecewiseFn p, PiecewiseFn q, PiecewiseFn r, PiecewiseFn s,
            bool singular_a = false, bool singular_b = false, ProblemConfig cfg = {});

    double a() const { return a_; }
    double b() const { return b_; }
    double width() const { return b_ - a_; }

    double p(double x) const { return p_(x); }
    double q(double x) const { return q_(x); }
    double r(double x) const { return r_(x); }
    double s(double x) const { return s_(x); }

    const PiecewiseFn& p_fn() const { return p_; }
    const PiecewiseFn& q_fn() const { return q_; }
    const PiecewiseFn& r_fn() const { return r_; }
    const PiecewiseFn& s_fn() const { return s_; }

    bool singular_a() const { return singular_a_; }
    bool singular_b() const { return singular_b_; }

    // Merged breakpoints of all four coefficients (includes a and b); the
    // integrator and quadrature align panels with these.
    std::span<const double> breakpoints() const { return breakpoints_; }

    const ProblemConfig& config() const { return cfg_; }

    // Breakpoint-aware adaptive quadrature of an arbitrary integrand over
    // [x0,x1] within [a,b]; extra split points may be appended.
    double quad(const std::function<double(double)>& f, double x0, double x1,
                std::span<const double> extra_breaks = {}) const;
    std::complex<double> quad_complex(const std::function<std::complex<double>(double)>& f,
                                      double x0, double x1,
                                      std::span<const double> extra_breaks = {}) const;

    bool p_positive_on_grid() const { return p_positive_; }

private:
    void validate();

    double a_, b_;
    PiecewiseFn p_, q_, r_, s_;
    bool singular_a_, singular_b_;
    ProblemConfig cfg_;
    std::vector<double> breakpoints_;
    bool p_positive_ = false;
};

// Parse the problem-file JSON:
//   { "interval": [a, b],
//     "coefficients": { "p": PIECES, "q": PIECES, "r": PIECES, "s": PIECES },
//     "singular": {"a": bool, "b": bool} }          // optional, default false
// with PIECES a list of {"from":x0,"to":x1,"expr":"..."} or
// {"from":x0,"to":x1,"table":[[x,y],...]}.
Problem problem_from_json(std::string_view json_text, ProblemConfig cfg = {});

} // namespace slq
