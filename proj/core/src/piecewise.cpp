#include "slq/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "slq/errors.hpp"

namespace slq {

double Table::eval(double x) const {
    if (xs.size() == 1) return ys[0];
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i + 1 >= xs.size()) i = xs.size() - 2;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

PiecewiseFn::PiecewiseFn(std::vector<Piece> pieces) {
    if (pieces.empty()) fail_pre("EmptyCoefficient", "a coefficient needs at least one piece");
    // Split table pieces at their interior sample points.
    std::vector<Piece> flat;
    for (auto& p : pieces) {
        if (!(p.from < p.to))
            fail_pre("BadPiece", "piece range is not increasing");
        if (auto* tab = std::get_if<Table>(&p.body)) {
            if (tab->xs.size() != tab->ys.size() || tab->xs.empty())
                fail_pre("BadPiece", "table needs matching nonempty x/y lists");
            for (std::size_t i = 1; i < tab->xs.size(); ++i)
                if (!(tab->xs[i - 1] < tab->xs[i]))
                    fail_pre("BadPiece", "table abscissae must be strictly increasing");
            std::vector<double> cuts{p.from};
            for (double t : tab->xs)
                if (t > p.from && t < p.to) cuts.push_back(t);
            cuts.push_back(p.to);
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                flat.push_back(Piece{cuts[i], cuts[i + 1], *tab});
        } else {
            flat.push_back(std::move(p));
        }
    }
    for (std::size_t i = 1; i < flat.size(); ++i)
        if (std::abs(flat[i].from - flat[i - 1].to) > 1e-12 * (1.0 + std::abs(flat[i].from)))
            fail_pre("BadPiece", "pieces must be contiguous");
    pieces_ = std::move(flat);
    breaks_.reserve(pieces_.size() + 1);
    breaks_.push_back(pieces_.front().from);
    for (auto& p : pieces_) breaks_.push_back(p.to);
}

PiecewiseFn PiecewiseFn::constant(double a, double b, double value) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->number = value;
    return PiecewiseFn({Piece{a, b, ExprPtr(e)}});
}

PiecewiseFn PiecewiseFn::from_expr(double a, double b, ExprPtr e) {
    return PiecewiseFn({Piece{a, b, std::move(e)}});
}

std::size_t PiecewiseFn::segment_of(double x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    if (it == breaks_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    if (i >= pieces_.size()) i = pieces_.size() - 1;
    return i;
}

double PiecewiseFn::eval_segment(std::size_t seg, double x) const {
    const Piece& p = pieces_[seg];
    if (auto* e = std::get_if<ExprPtr>(&p.body)) return (*e)->eval(x);
    return std::get<Table>(p.body).eval(x);
}

double PiecewiseFn::operator()(double x) const {
    return eval_segment(segment_of(x), x);
}

} // namespace slq
