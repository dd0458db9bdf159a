#pragma once

#include <span>
#include <variant>
#include <vector>

#include "slq/expr.hpp"

namespace slq {

// Linear interpolation table; sample abscissae become breakpoints.
struct Table {
    std::vector<double> xs;
    std::vector<double> ys;

    double eval(double x) const;
};

struct Piece {
    double from = 0.0;
    double to = 0.0;
    std::variant<ExprPtr, Table> body;
};

// A coefficient on [a,b]: contiguous pieces with strictly increasing
// breakpoints. At an interior breakpoint the value belongs to the
// right-hand piece, so a unit step at c has value 1 at x = c.
class PiecewiseFn {
public:
    PiecewiseFn() = default;
    explicit PiecewiseFn(std::vector<Piece> pieces);

    // One-piece conveniences.
    static PiecewiseFn constant(double a, double b, double value);
    static PiecewiseFn from_expr(double a, double b, ExprPtr e);

    double operator()(double x) const;

    // Evaluate pinned to segment `seg` even at its boundary points; used by
    // the integrator and quadrature so panels never sample across a jump.
    double eval_segment(std::size_t seg, double x) const;

    std::size_t segment_of(double x) const;
    std::size_t segment_count() const { return pieces_.size(); }

    double lo() const { return pieces_.front().from; }
    double hi() const { return pieces_.back().to; }

    // All breakpoints including both interval ends.
    std::span<const double> breakpoints() const { return breaks_; }

    const std::vector<Piece>& pieces() const { return pieces_; }

private:
    std::vector<Piece> pieces_;  // table pieces pre-split at their sample points
    std::vector<double> breaks_;
};

} // namespace slq
