#include "slq/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "slq/errors.hpp"

namespace slq {

namespace {

constexpr double kPi = std::numbers::pi;

struct LaunchResult {
    Trajectory traj;
    double d = 0.0;  // renormalized characteristic value
};

double boundary_functional(const QuasiState& st, double phi) {
    return (st.u * std::cos(phi) - st.u1 * std::sin(phi)).real();
}

// Solution with the phi_a data at a, integrated across; D = B_b(u) / scale.
LaunchResult launch_separated(const Problem& pr, double phi_a, double phi_b, double lambda,
                              const IvpOptions& iopts) {
    LaunchResult lr;
    lr.traj = integrate(pr, Complex(lambda, 0.0),
                        {pr.a(), Complex(std::sin(phi_a)), Complex(std::cos(phi_a))}, pr.b(), {},
                        iopts);
    const QuasiState end = lr.traj.at(pr.b());
    const double scale = std::max({std::abs(end.u), std::abs(end.u1), 1.0});
    lr.d = boundary_functional(end, phi_b) / scale;
    return lr;
}

void require_sign_definite_p(const Problem& pr) {
    const int n = 64;
    double sign = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = pr.a() + pr.width() * (i + 0.5) / n;
        const double v = pr.p(x);
        if (sign == 0.0) sign = v > 0 ? 1.0 : -1.0;
        else if ((v > 0 ? 1.0 : -1.0) != sign)
            fail_pre("SignIndefiniteP", "p changes sign on the grid");
    }
}

double liouville_length(const Problem& pr) {
    try {
        QuadOptions q{1e-8, 24};
        return quad([&](double x) { return std::sqrt(std::abs(pr.r(x) / pr.p(x))); }, pr.a(),
                    pr.b(), pr.breakpoints(), q);
    } catch (const Error&) {
        return pr.width();
    }
}

double r_norm2(const Problem& pr, const Trajectory& t) {
    return pr.quad([&](double x) { return std::norm(t.u(x)) * pr.r(x); }, pr.a(), pr.b(),
                   t.knots());
}

Complex r_inner(const Problem& pr, const Trajectory& f, const Trajectory& g) {
    // <f, g>_r, linear in f
    std::vector<double> cuts = f.knots();
    const auto& kg = g.knots();
    cuts.insert(cuts.end(), kg.begin(), kg.end());
    std::sort(cuts.begin(), cuts.end());
    return pr.quad_complex([&](double x) { return f.u(x) * std::conj(g.u(x)) * pr.r(x); },
                           pr.a(), pr.b(), cuts);
}

} // namespace

std::vector<double> interior_zeros(const Trajectory& t, double x0, double x1,
                                   double cluster_tol) {
    std::vector<double> zeros;
    if (x1 <= x0) return zeros;
    std::vector<double> grid{x0};
    for (double k : t.knots())
        if (k > x0 && k < x1) grid.push_back(k);
    grid.push_back(x1);

    double prev_x = grid.front();
    double prev_v = t.u(prev_x).real();
    auto scan = [&](double a, double b) {
        const int sub = 4;
        for (int i = 1; i <= sub; ++i) {
            const double x = a + (b - a) * i / sub;
            const double v = t.u(x).real();
            if (prev_v != 0.0 && v != 0.0 && (prev_v < 0) != (v < 0)) {
                double lo = prev_x, hi = x, vlo = prev_v;
                for (int it = 0; it < 80 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double vm = t.u(mid).real();
                    if (vm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((vm < 0) == (vlo < 0)) {
                        lo = mid;
                        vlo = vm;
                    } else {
                        hi = mid;
                    }
                }
                zeros.push_back(0.5 * (lo + hi));
            }
            if (v != 0.0) {
                prev_v = v;
                prev_x = x;
            }
        }
    };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) scan(grid[i], grid[i + 1]);

    for (std::size_t i = 1; i < zeros.size(); ++i)
        if (zeros[i] - zeros[i - 1] < cluster_tol)
            fail_num("ZeroClusterUnresolved",
                     "two zeros closer than cluster tolerance near x = " +
                         std::to_string(zeros[i]));
    return zeros;
}

double char_separated(const Problem& pr, double phi_a, double phi_b, double lambda,
                      EigenOptions opts) {
    IvpOptions iopts = opts.ivp;
    iopts.dense = false;
    return launch_separated(pr, phi_a, phi_b, lambda, iopts).d;
}

int oscillation_count(const Problem& pr, double phi_a, double lambda, EigenOptions opts) {
    require_sign_definite_p(pr);
    IvpOptions iopts = opts.ivp;
    iopts.dense = true;
    LaunchResult lr = launch_separated(pr, phi_a, 0.0, lambda, iopts);
    const double margin = 1e-9 * pr.width();
    return static_cast<int>(
        interior_zeros(lr.traj, pr.a() + margin, pr.b() - margin, opts.zero_cluster_tol).size());
}

namespace {

// ---- separated-problem scan --------------------------------------------

struct GridPoint {
    double lam;
    double d;
    int count;
};

GridPoint eval_grid_point(const Problem& pr, double phi_a, double phi_b, double lam,
                          const EigenOptions& opts) {
    IvpOptions iopts = opts.ivp;
    iopts.dense = true;
    LaunchResult lr = launch_separated(pr, phi_a, phi_b, lam, iopts);
    const double margin = 1e-9 * pr.width();
    const int n = static_cast<int>(
        interior_zeros(lr.traj, pr.a() + margin, pr.b() - margin, opts.zero_cluster_tol).size());
    return {lam, lr.d, n};
}

// bisection + secant refinement of a sign-change bracket
double refine_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                   double fhi, double rel_tol) {
    double best = 0.5 * (lo + hi);
    for (int it = 0; it < 128; ++it) {
        if (hi - lo <= rel_tol * (1.0 + std::abs(lo))) break;
        double cand = hi - fhi * (hi - lo) / (fhi - flo);
        const double mid = 0.5 * (lo + hi);
        if (!(cand > lo + 0.1 * (hi - lo) && cand < hi - 0.1 * (hi - lo))) cand = mid;
        const double fc = f(cand);
        if (fc == 0.0) return cand;
        if ((fc < 0) == (flo < 0)) {
            lo = cand;
            flo = fc;
        } else {
            hi = cand;
            fhi = fc;
        }
        best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    }
    return best;
}

std::vector<double> separated_roots(const Problem& pr, double phi_a, double phi_b, double lo,
                                    double hi, const EigenOptions& opts) {
    const double len = liouville_length(pr);
    auto map_t = [](double lam) { return lam >= 0 ? std::sqrt(lam) : -std::sqrt(-lam); };
    auto unmap = [](double t) { return t >= 0 ? t * t : -t * t; };
    const double dt = std::min(0.5, kPi / (4.0 * std::max(len, 1e-3)));

    std::vector<GridPoint> grid;
    for (double t = map_t(lo);; t += dt) {
        const double lam = std::min(unmap(t), hi);
        grid.push_back(eval_grid_point(pr, phi_a, phi_b, lam, opts));
        if (lam >= hi) break;
    }

    auto charfn = [&](double lam) { return char_separated(pr, phi_a, phi_b, lam, opts); };

    // refine cells until the oscillation-count guard is satisfied
    for (int round = 0;; ++round) {
        bool refined = false;
        std::vector<GridPoint> next;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            next.push_back(grid[i]);
            const GridPoint& g0 = grid[i];
            const GridPoint& g1 = grid[i + 1];
            const int jump = g1.count - g0.count;
            const bool sign_change = (g0.d < 0) != (g1.d < 0);
            const bool tiny = g1.lam - g0.lam <= 1e-6 * (1.0 + std::abs(g0.lam));
            if (jump > (sign_change ? 1 : 0) && !tiny) {
                next.push_back(eval_grid_point(pr, phi_a, phi_b, 0.5 * (g0.lam + g1.lam), opts));
                refined = true;
            }
        }
        next.push_back(grid.back());
        grid = std::move(next);
        if (!refined) break;
        if (round + 1 >= opts.max_grid_refine)
            fail_num("WindowTooCoarse",
                     "oscillation-count guard kept failing after max grid refinement");
    }

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const GridPoint& g0 = grid[i];
        const GridPoint& g1 = grid[i + 1];
        if (std::abs(g0.d) <= opts.d_tol) {
            roots.push_back(g0.lam);
            continue;
        }
        if ((g0.d < 0) != (g1.d < 0))
            roots.push_back(refine_root(charfn, g0.lam, g1.lam, g0.d, g1.d, opts.lambda_rel_tol));
    }
    if (!grid.empty() && std::abs(grid.back().d) <= opts.d_tol) roots.push_back(grid.back().lam);

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double u, double v) {
                                return std::abs(u - v) <=
                                       10 * opts.lambda_rel_tol * (1.0 + std::abs(u));
                            }),
                roots.end());
    return roots;
}

// ---- coupled-problem scan ------------------------------------------------

double golden_min(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > rel_tol * (1.0 + std::abs(lo))) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

std::vector<double> coupled_roots(const Problem& pr, const CoupledBC& bc, double lo, double hi,
                                  const EigenOptions& opts) {
    const double len = liouville_length(pr);
    auto map_t = [](double lam) { return lam >= 0 ? std::sqrt(lam) : -std::sqrt(-lam); };
    auto unmap = [](double t) { return t >= 0 ? t * t : -t * t; };
    const double dt = std::min(0.5, kPi / (4.0 * std::max(len, 1e-3)));

    IvpOptions iopts = opts.ivp;
    iopts.dense = false;
    auto delta = [&](double lam) { return coupled_discriminant(pr, bc, lam, iopts); };

    std::vector<std::pair<double, double>> grid;  // (lambda, Delta)
    for (double t = map_t(lo);; t += dt) {
        const double lam = std::min(unmap(t), hi);
        grid.emplace_back(lam, delta(lam));
        if (lam >= hi) break;
    }

    double dscale = 1.0;
    for (auto& [lam, d] : grid) dscale = std::max(dscale, std::abs(d));
    const double accept = 1e-8 * dscale;

    const Complex rot = std::polar(1.0, bc.phi);
    auto coincid = [&](double lam) {
        auto T = transfer_matrix(pr, Complex(lam, 0.0), iopts);
        return frobenius_norm(to_complex(bc.R) * rot - T.m);
    };

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const auto [l0, d0] = grid[i];
        const auto [l1, d1] = grid[i + 1];
        if (std::abs(d0) <= accept) {
            roots.push_back(l0);
            continue;
        }
        if ((d0 < 0) != (d1 < 0)) {
            roots.push_back(refine_root(delta, l0, l1, d0, d1, opts.lambda_rel_tol));
            continue;
        }
        // tangent roots appear as interior minima of |Delta|
        if (i > 0) {
            const double dm1 = std::abs(grid[i - 1].second);
            if (std::abs(d0) < dm1 && std::abs(d0) <= std::abs(d1) &&
                std::abs(d0) < 0.25 * dscale) {
                auto absdelta = [&](double lam) { return std::abs(delta(lam)); };
                double cand =
                    golden_min(absdelta, grid[i - 1].first, l1, opts.lambda_rel_tol * 10);
                // a genuine tangency coincides with e^{i phi} R = T(lambda);
                // that norm is V-shaped in lambda, so it localizes the root
                // far better than the flat quadratic of |Delta|
                const double w = std::max(l1 - grid[i - 1].first, 1e-6);
                const double cand2 = golden_min(coincid, cand - 0.5 * w, cand + 0.5 * w,
                                                opts.lambda_rel_tol * 0.1);
                if (coincid(cand2) <= opts.coincidence_tol) cand = cand2;
                if (std::abs(delta(cand)) <= accept) roots.push_back(cand);
            }
        }
    }
    if (!grid.empty() && std::abs(grid.back().second) <= accept)
        roots.push_back(grid.back().first);

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double u, double v) {
                                return std::abs(u - v) <=
                                       100 * opts.lambda_rel_tol * (1.0 + std::abs(u));
                            }),
                roots.end());
    return roots;
}

// ---- eigenpair assembly ----------------------------------------------------

Eigenpair build_separated_pair(const Problem& pr, const SeparatedBC& bc, double lam,
                               const EigenOptions& opts) {
    Eigenpair ep;
    ep.lambda = lam;
    ep.multiplicity = 1;
    IvpOptions iopts = opts.ivp;
    iopts.dense = true;
    LaunchResult lr = launch_separated(pr, bc.phi_a, bc.phi_b, lam, iopts);
    const double n2 = r_norm2(pr, lr.traj);
    Trajectory u = lr.traj.scaled(1.0 / std::sqrt(n2));
    const auto res = bc_residual(BoundaryCondition(bc), u.at(pr.a()), u.at(pr.b()));
    ep.bc_residual_norm = std::max(std::abs(res[0]), std::abs(res[1]));
    ep.norm_defect = std::abs(r_norm2(pr, u) - 1.0);
    const double margin = 1e-9 * pr.width();
    ep.osc_index = static_cast<int>(
        interior_zeros(u, pr.a() + margin, pr.b() - margin, opts.zero_cluster_tol).size());
    ep.funcs.push_back(std::move(u));
    return ep;
}

Eigenpair build_coupled_pair(const Problem& pr, const CoupledBC& bc, double lam,
                             const EigenOptions& opts) {
    Eigenpair ep;
    ep.lambda = lam;
    IvpOptions iopts = opts.ivp;
    iopts.dense = false;
    const Complex rot = std::polar(1.0, bc.phi);
    auto T = transfer_matrix(pr, Complex(lam, 0.0), iopts);
    const Mat2c M = to_complex(bc.R) * rot - T.m;
    const double tscale = std::max(1.0, frobenius_norm(T.m));
    iopts.dense = true;

    auto normalized = [&](Trajectory t) {
        const double n2 = r_norm2(pr, t);
        return t.scaled(1.0 / std::sqrt(n2));
    };

    if (frobenius_norm(M) <= opts.coincidence_tol * tscale) {
        ep.multiplicity = 2;
        Trajectory t1 = normalized(integrate(pr, Complex(lam, 0.0),
                                             {pr.a(), Complex(1), Complex(0)}, pr.b(), {}, iopts));
        Trajectory t2raw = integrate(pr, Complex(lam, 0.0), {pr.a(), Complex(0), Complex(1)},
                                     pr.b(), {}, iopts);
        const Complex proj = r_inner(pr, t2raw, t1);
        Trajectory t2 = normalized(t2raw.combo(Complex(1), t1, -proj));
        ep.funcs.push_back(std::move(t1));
        ep.funcs.push_back(std::move(t2));
    } else {
        ep.multiplicity = 1;
        // kernel direction of the (numerically rank-one) matrix M
        const Mat2c A = M.adjugate();
        const double c1 = std::abs(A.a11) + std::abs(A.a21);
        const double c2 = std::abs(A.a12) + std::abs(A.a22);
        Complex v0 = c1 >= c2 ? A.a11 : A.a12;
        Complex v1 = c1 >= c2 ? A.a21 : A.a22;
        const double vn = std::sqrt(std::norm(v0) + std::norm(v1));
        if (vn < 1e-14) {
            v0 = 1;
            v1 = 0;
        } else {
            v0 /= vn;
            v1 /= vn;
        }
        ep.funcs.push_back(
            normalized(integrate(pr, Complex(lam, 0.0), {pr.a(), v0, v1}, pr.b(), {}, iopts)));
    }

    double resid = 0.0, ndef = 0.0;
    for (const auto& f : ep.funcs) {
        const auto res = bc_residual(BoundaryCondition(bc), f.at(pr.a()), f.at(pr.b()));
        resid = std::max({resid, std::abs(res[0]), std::abs(res[1])});
        ndef = std::max(ndef, std::abs(r_norm2(pr, f) - 1.0));
    }
    ep.bc_residual_norm = resid;
    ep.norm_defect = ndef;
    return ep;
}

} // namespace

std::vector<Eigenpair> eigenvalues(const Problem& pr, const BoundaryCondition& bc, double lo,
                                   double hi, EigenOptions opts) {
    if (!(lo < hi)) fail_pre("BadWindow", "need lo < hi");
    std::vector<Eigenpair> out;
    if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
        for (double lam : separated_roots(pr, s->phi_a, s->phi_b, lo, hi, opts))
            out.push_back(build_separated_pair(pr, *s, lam, opts));
    } else {
        const auto& c = std::get<CoupledBC>(bc);
        for (double lam : coupled_roots(pr, c, lo, hi, opts))
            out.push_back(build_coupled_pair(pr, c, lam, opts));
    }
    return out;
}

double lower_bound(const Problem& pr, const BoundaryCondition& bc, EigenOptions opts) {
    if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
        // walk lambda down until the launched solution stops oscillating
        double lam = 0.0;
        for (int it = 0;; ++it) {
            if (oscillation_count(pr, s->phi_a, lam, opts) == 0) break;
            lam -= std::max(1.0, std::abs(lam));
            if (it >= 64) fail_num("WindowTooCoarse", "no oscillation-free lambda found");
        }
        lam -= 1.0;  // the ground state itself has no interior zeros
        double hi = lam + std::max(1.0, std::abs(lam));
        for (int it = 0; it < 64; ++it) {
            auto ev = eigenvalues(pr, bc, lam, hi, opts);
            if (!ev.empty()) return ev.front().lambda;
            hi = lam + 2.0 * (hi - lam);
        }
        fail_num("WindowTooCoarse", "lowest eigenvalue not found in expanding window");
    }
    // coupled: search downward from the first Dirichlet eigenvalue; at least
    // one coupled eigenvalue lies at or below it
    const double mu1 = lower_bound(pr, SeparatedBC{0.0, 0.0}, opts);
    double hi = mu1 + 1.0;
    double width = std::max(4.0, std::abs(mu1));
    double best = std::numeric_limits<double>::infinity();
    int empty_rounds = 0;
    for (int it = 0; it < 64 && empty_rounds < 2; ++it) {
        auto ev = eigenvalues(pr, bc, hi - width, hi, opts);
        if (!ev.empty()) {
            best = std::min(best, ev.front().lambda);
            empty_rounds = 0;
        } else if (best < std::numeric_limits<double>::infinity()) {
            ++empty_rounds;
        }
        hi -= width;
        width *= 2.0;
    }
    if (!std::isfinite(best))
        fail_num("WindowTooCoarse", "no coupled eigenvalue found in downward search");
    return best;
}

std::vector<Eigenpair> eigenvalues_count(const Problem& pr, const BoundaryCondition& bc, int n,
                                         EigenOptions opts) {
    if (n <= 0) return {};
    const double lb = lower_bound(pr, bc, opts);
    const double len = std::max(liouville_length(pr), 1e-3);
    const double lo = lb - std::max(1.0, 1e-3 * std::abs(lb));
    const double k0 = lb > 0 ? std::sqrt(lb) : 0.0;
    double hi = std::pow(k0 + (n + 2) * kPi / len, 2) + 1.0;
    for (int it = 0; it < 16; ++it) {
        auto ev = eigenvalues(pr, bc, lo, hi, opts);
        int count = 0;
        for (const auto& e : ev) count += e.multiplicity;
        if (count >= n) {
            std::vector<Eigenpair> out;
            int kept = 0;
            for (auto& e : ev) {
                if (kept >= n) break;
                kept += e.multiplicity;
                out.push_back(std::move(e));
            }
            return out;
        }
        hi = lo + 2.0 * (hi - lo);
    }
    fail_num("WindowTooCoarse", "window growth did not reach the requested eigenvalue count");
}

namespace {

// u(x) * I(x) with I a cumulative integral of 1/(p u^2); the quasi-derivative
// picks up u^[1] I +- 1/u. Covers principal and non-principal assembly on
// either endpoint side.
class ModulatedTrajectory final : public detail::TrajectoryImpl {
public:
    ModulatedTrajectory(Trajectory base, PiecewiseFn p, double from, double to, bool principal,
                        EndpointSide side)
        : base_(std::move(base)), p_(std::move(p)), from_(from), to_(to), principal_(principal),
          side_(side) {
        knots_ = base_.knots();
        const std::size_t m = knots_.size();
        pre_.assign(m, 0.0);
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        if (side_ == EndpointSide::A) std::reverse(order.begin(), order.end());
        double acc = 0.0;
        double at = from_;
        for (std::size_t idx : order) {
            const double t = knots_[idx];
            if ((side_ == EndpointSide::B && t < from_) ||
                (side_ == EndpointSide::A && t > from_)) {
                pre_[idx] = 0.0;
                continue;
            }
            acc += std::abs(seg(at, t));
            pre_[idx] = acc;
            at = t;
        }
        total_ = integral_to(to_);
    }

    Complex u(double x) const override { return base_.u(x) * Complex(weight(x)); }
    Complex u1(double x) const override {
        const double w = weight(x);
        const double orient = side_ == EndpointSide::B ? 1.0 : -1.0;
        const double deriv = principal_ ? -orient : orient;
        return base_.u1(x) * Complex(w) + Complex(deriv) / base_.u(x);
    }
    Complex z() const override { return base_.z(); }
    double lo() const override { return std::min(from_, to_); }
    double hi() const override { return std::max(from_, to_); }
    const std::vector<double>& knots() const override { return knots_; }

private:
    double seg(double t0, double t1) const {
        if (t0 == t1) return 0.0;
        return slq::quad([&](double t) { return 1.0 / (p_(t) * std::norm(base_.u(t))); }, t0, t1,
                         {}, QuadOptions{1e-13, 12});
    }

    double integral_to(double x) const {
        // nearest precomputed knot on the anchor side of x
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        std::size_t k = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        if (side_ == EndpointSide::A && knots_[k] < x && k + 1 < knots_.size()) ++k;
        return pre_[k] + std::abs(seg(knots_[k], x));
    }

    double weight(double x) const {
        const double ix = integral_to(x);
        return principal_ ? total_ - ix : ix;
    }

    Trajectory base_;
    PiecewiseFn p_;
    double from_, to_;
    bool principal_;
    EndpointSide side_;
    double total_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> pre_;
};

} // namespace

PrincipalPair principal_solution(const Problem& pr, double lambda, EndpointSide side, double x0,
                                 EigenOptions opts) {
    const double endpoint = side == EndpointSide::B ? pr.b() : pr.a();
    if ((side == EndpointSide::B && !(x0 < endpoint)) ||
        (side == EndpointSide::A && !(x0 > endpoint)))
        fail_pre("BadWindow", "x0 must lie inside the interval before the endpoint");
    for (int i = 0; i < 64; ++i) {
        const double x = x0 + (endpoint - x0) * (i + 0.5) / 64.0;
        if (pr.p(x) <= 0.0) fail_pre("SignIndefiniteP", "p must be positive near the endpoint");
    }

    IvpOptions iopts = opts.ivp;
    iopts.dense = true;
    Trajectory u =
        integrate(pr, Complex(lambda, 0.0), {x0, Complex(1), Complex(0)}, endpoint, {}, iopts);
    auto zs = side == EndpointSide::B
                  ? interior_zeros(u, x0 + 1e-12, endpoint - 1e-12, opts.zero_cluster_tol)
                  : interior_zeros(u, endpoint + 1e-12, x0 - 1e-12, opts.zero_cluster_tol);
    if (zs.size() >= 3)
        fail_pre("OscillatoryAtEndpoint",
                 "launched solution oscillates toward the endpoint");
    if (!zs.empty())
        fail_pre("ZeroInWindow", "launched solution vanishes at x = " +
                                     std::to_string(zs.front()) +
                                     "; move x0 beyond the last zero");

    PrincipalPair out;
    out.lambda = lambda;
    out.side = side;
    out.nonprincipal = Trajectory(std::make_shared<ModulatedTrajectory>(
        u, pr.p_fn(), x0, endpoint, /*principal=*/false, side));
    out.principal = Trajectory(std::make_shared<ModulatedTrajectory>(
        u, pr.p_fn(), x0, endpoint, /*principal=*/true, side));

    // window evidence for the defining convergence split of int dt/(p u^2)
    ClassifyOptions copts;
    std::vector<double> pts;
    for (int k = 1; k <= copts.windows; ++k)
        pts.push_back(endpoint - (endpoint - x0) * std::pow(2.0, -k));
    const Trajectory& u0 = out.principal;
    const Trajectory& u1 = out.nonprincipal;
    out.principal_tail = tail_window_scan(
        pr, "int dt/(p u0^2)",
        [&](double t) { return 1.0 / (pr.p(t) * std::norm(u0.u(t))); }, pts, copts, u.knots());
    out.nonprincipal_tail = tail_window_scan(
        pr, "int dt/(p u1^2)",
        [&](double t) { return 1.0 / (pr.p(t) * std::norm(u1.u(t))); }, pts, copts, u.knots());
    return out;
}

} // namespace slq
