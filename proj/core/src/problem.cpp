#include "slq/problem.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "slq/errors.hpp"

namespace slq {

Problem::Problem(double a, double b, PiecewiseFn p, PiecewiseFn q, PiecewiseFn r, PiecewiseFn s,
                 bool singular_a, bool singular_b, ProblemConfig cfg)
    : a_(a), b_(b), p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)),
      singular_a_(singular_a), singular_b_(singular_b), cfg_(cfg) {
    if (!std::isfinite(a_) || !std::isfinite(b_) || !(a_ < b_))
        fail_pre("BadInterval", "interval endpoints must be finite with a < b");
    for (const PiecewiseFn* f : {&p_, &q_, &r_, &s_}) {
        if (std::abs(f->lo() - a_) > 1e-12 * (1.0 + std::abs(a_)) ||
            std::abs(f->hi() - b_) > 1e-12 * (1.0 + std::abs(b_)))
            fail_pre("BadPiece", "coefficient pieces must cover exactly [a,b]");
        for (double t : f->breakpoints()) breakpoints_.push_back(t);
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end(),
                                   [&](double u, double v) {
                                       return std::abs(u - v) <= 1e-13 * (1.0 + std::abs(u));
                                   }),
                       breakpoints_.end());
    validate();
}

void Problem::validate() {
    // Grid check of Hypothesis r > 0, p != 0, plus finiteness of all four
    // coefficients on the open interval.
    const int n = std::max(8, cfg_.validation_grid);
    p_positive_ = true;
    for (std::size_t seg = 0; seg + 1 < breakpoints_.size(); ++seg) {
        const double lo = breakpoints_[seg], hi = breakpoints_[seg + 1];
        const int m = std::max(4, n / static_cast<int>(breakpoints_.size() - 1));
        for (int i = 0; i <= m; ++i) {
            // stay strictly inside the segment
            const double t = lo + (hi - lo) * (i + 0.5) / (m + 1.0);
            const double pv = p_(t), qv = q_(t), rv = r_(t), sv = s_(t);
            if (!std::isfinite(pv) || !std::isfinite(qv) || !std::isfinite(rv) ||
                !std::isfinite(sv))
                fail_pre("HypothesisViolation",
                         "coefficient not finite at x = " + std::to_string(t));
            if (rv <= 0.0)
                fail_pre("HypothesisViolation",
                         "r(x) <= 0 at x = " + std::to_string(t) + " (r = " +
                             std::to_string(rv) + ")");
            if (pv == 0.0)
                fail_pre("HypothesisViolation", "p(x) = 0 at x = " + std::to_string(t));
            if (pv < 0.0) p_positive_ = false;
        }
    }

    if (singular_a_ && singular_b_) return;
    // Regularity: the L1 norm of |1/p| + |q| + |r| + |s| must be finite up to
    // any endpoint not declared singular. Integrate the half interval next to
    // each such endpoint and attribute failures to it.
    auto weight = [this](double x) {
        return std::abs(1.0 / p_(x)) + std::abs(q_(x)) + std::abs(r_(x)) + std::abs(s_(x));
    };
    const double mid = 0.5 * (a_ + b_);
    if (!singular_a_) {
        try {
            (void)quad(weight, a_, mid);
        } catch (const Error&) {
            fail_pre("NonIntegrable",
                     "|1/p|+|q|+|r|+|s| is not integrable near a; declare the endpoint "
                     "singular if intended");
        }
    }
    if (!singular_b_) {
        try {
            (void)quad(weight, mid, b_);
        } catch (const Error&) {
            fail_pre("NonIntegrable",
                     "|1/p|+|q|+|r|+|s| is not integrable near b; declare the endpoint "
                     "singular if intended");
        }
    }
}

double Problem::quad(const std::function<double(double)>& f, double x0, double x1,
                     std::span<const double> extra_breaks) const {
    if (extra_breaks.empty()) return slq::quad(f, x0, x1, breakpoints_, cfg_.quad);
    std::vector<double> cuts(breakpoints_.begin(), breakpoints_.end());
    cuts.insert(cuts.end(), extra_breaks.begin(), extra_breaks.end());
    std::sort(cuts.begin(), cuts.end());
    return slq::quad(f, x0, x1, cuts, cfg_.quad);
}

std::complex<double> Problem::quad_complex(const std::function<std::complex<double>(double)>& f,
                                           double x0, double x1,
                                           std::span<const double> extra_breaks) const {
    if (extra_breaks.empty()) return slq::quad_complex(f, x0, x1, breakpoints_, cfg_.quad);
    std::vector<double> cuts(breakpoints_.begin(), breakpoints_.end());
    cuts.insert(cuts.end(), extra_breaks.begin(), extra_breaks.end());
    std::sort(cuts.begin(), cuts.end());
    return slq::quad_complex(f, x0, x1, cuts, cfg_.quad);
}

namespace {

PiecewiseFn pieces_from_json(const nlohmann::json& j, double a, double b,
                             const std::string& name) {
    if (!j.is_array() || j.empty())
        fail_pre("BadProblemFile", "coefficient '" + name + "' must be a nonempty list of pieces");
    std::vector<Piece> pieces;
    for (const auto& pj : j) {
        if (!pj.contains("from") || !pj.contains("to"))
            fail_pre("BadProblemFile", "piece of '" + name + "' missing from/to");
        Piece p;
        p.from = pj.at("from").get<double>();
        p.to = pj.at("to").get<double>();
        if (pj.contains("expr")) {
            p.body = parse_expr(pj.at("expr").get<std::string>());
        } else if (pj.contains("table")) {
            Table t;
            for (const auto& row : pj.at("table")) {
                if (!row.is_array() || row.size() != 2)
                    fail_pre("BadProblemFile", "table rows must be [x, y] pairs");
                t.xs.push_back(row[0].get<double>());
                t.ys.push_back(row[1].get<double>());
            }
            p.body = std::move(t);
        } else {
            fail_pre("BadProblemFile", "piece of '" + name + "' needs 'expr' or 'table'");
        }
        pieces.push_back(std::move(p));
    }
    PiecewiseFn fn(std::move(pieces));
    if (std::abs(fn.lo() - a) > 1e-12 * (1.0 + std::abs(a)) ||
        std::abs(fn.hi() - b) > 1e-12 * (1.0 + std::abs(b)))
        fail_pre("BadProblemFile", "pieces of '" + name + "' do not cover [a,b]");
    return fn;
}

} // namespace

Problem problem_from_json(std::string_view json_text, ProblemConfig cfg) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail_pre("BadProblemFile", std::string("JSON parse failure: ") + e.what());
    }
    try {
        const auto& iv = j.at("interval");
        if (!iv.is_array() || iv.size() != 2)
            fail_pre("BadProblemFile", "'interval' must be [a, b]");
        const double a = iv[0].get<double>();
        const double b = iv[1].get<double>();
        const auto& co = j.at("coefficients");
        PiecewiseFn p = pieces_from_json(co.at("p"), a, b, "p");
        PiecewiseFn q = pieces_from_json(co.at("q"), a, b, "q");
        PiecewiseFn r = pieces_from_json(co.at("r"), a, b, "r");
        PiecewiseFn s = pieces_from_json(co.at("s"), a, b, "s");
        bool sing_a = false, sing_b = false;
        if (j.contains("singular")) {
            sing_a = j["singular"].value("a", false);
            sing_b = j["singular"].value("b", false);
        }
        return Problem(a, b, std::move(p), std::move(q), std::move(r), std::move(s), sing_a,
                       sing_b, cfg);
    } catch (const nlohmann::json::exception& e) {
        fail_pre("BadProblemFile", std::string("problem file malformed: ") + e.what());
    }
}

} // namespace slq
