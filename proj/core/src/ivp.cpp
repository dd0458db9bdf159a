#include "slq/ivp.hpp"

#include <algorithm>
#include <cmath>

#include "slq/errors.hpp"

namespace slq {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Coefficients of the fourth-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct Vec {
    Complex u, v;
    Vec operator+(const Vec& o) const { return {u + o.u, v + o.v}; }
    Vec operator-(const Vec& o) const { return {u - o.u, v - o.v}; }
    Vec operator*(double s) const { return {u * s, v * s}; }
    bool finite() const {
        return std::isfinite(u.real()) && std::isfinite(u.imag()) && std::isfinite(v.real()) &&
               std::isfinite(v.imag());
    }
};

inline Vec axpy(double a, const Vec& x, const Vec& y) { return {y.u + a * x.u, y.v + a * x.v}; }

struct DenseSeg {
    double x0, h;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double x) const {
        const double th = (x - x0) / h;
        const double th1 = 1.0 - th;
        Vec out;
        out.u = r1.u + th * (r2.u + th1 * (r3.u + th * (r4.u + th1 * r5.u)));
        out.v = r1.v + th * (r2.v + th1 * (r3.v + th * (r4.v + th1 * r5.v)));
        return out;
    }
};

// Right-hand side pinned to one coefficient segment.
struct Rhs {
    const Problem& pr;
    Complex z;
    const std::function<Complex(double)>* g;
    std::size_t seg_p, seg_q, seg_r, seg_s;

    void pin(double x_inside) {
        seg_p = pr.p_fn().segment_of(x_inside);
        seg_q = pr.q_fn().segment_of(x_inside);
        seg_r = pr.r_fn().segment_of(x_inside);
        seg_s = pr.s_fn().segment_of(x_inside);
    }

    Vec operator()(double x, const Vec& y) const {
        const double pv = pr.p_fn().eval_segment(seg_p, x);
        const double qv = pr.q_fn().eval_segment(seg_q, x);
        const double rv = pr.r_fn().eval_segment(seg_r, x);
        const double sv = pr.s_fn().eval_segment(seg_s, x);
        Vec f;
        f.u = -sv * y.u + y.v / pv;
        f.v = (qv - z * rv) * y.u + sv * y.v;
        if (g && *g) f.v -= rv * (*g)(x);
        return f;
    }
};

class RkTrajectory final : public detail::TrajectoryImpl {
public:
    RkTrajectory(Complex z, bool dense) : z_(z), dense_(dense) {}

    Complex u(double x) const override { return locate(x).u; }
    Complex u1(double x) const override { return locate(x).v; }
    Complex z() const override { return z_; }
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    const std::vector<double>& knots() const override { return knots_; }

    // assembled by the integrator driver:
    std::vector<DenseSeg> segs_;        // sorted ascending by interval
    std::vector<double> knots_;         // ascending
    QuasiState first_, last_;           // states at lo_ and hi_
    double lo_ = 0, hi_ = 0;
    Complex z_;
    bool dense_;

    void finalize() {
        if (dense_) {
            std::sort(segs_.begin(), segs_.end(), [](const DenseSeg& a, const DenseSeg& b) {
                return std::min(a.x0, a.x0 + a.h) < std::min(b.x0, b.x0 + b.h);
            });
            knots_.clear();
            for (const auto& s : segs_) knots_.push_back(std::min(s.x0, s.x0 + s.h));
            knots_.push_back(hi_);
        } else {
            knots_ = {lo_, hi_};
        }
    }

private:
    Vec locate(double x) const {
        const double pad = 1e-12 * (1.0 + std::abs(lo_) + std::abs(hi_));
        if (x < lo_ - pad || x > hi_ + pad)
            fail_pre("OutOfRange", "trajectory query outside integrated range");
        if (!dense_ || segs_.empty()) {
            if (std::abs(x - lo_) <= pad) return {first_.u, first_.u1};
            if (std::abs(x - hi_) <= pad) return {last_.u, last_.u1};
            fail_pre("DenseOutputDisabled",
                     "trajectory was integrated endpoint-only (opts.dense = false)");
        }
        // binary search for the segment containing x
        std::size_t lo = 0, hi = segs_.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            const double start = std::min(segs_[mid].x0, segs_[mid].x0 + segs_[mid].h);
            if (start <= x) lo = mid;
            else hi = mid;
        }
        return segs_[lo].eval(std::clamp(x, lo_, hi_));
    }
};

// One adaptive sweep from init.x to target (either direction), appending
// dense segments to out.
void sweep(const Problem& pr, Complex z, QuasiState init, double target,
           const std::function<Complex(double)>& g, const IvpOptions& opts, RkTrajectory& out) {
    const double dir = target >= init.x ? 1.0 : -1.0;
    out.last_ = init;
    if (target == init.x) return;

    Rhs rhs{pr, z, &g, 0, 0, 0, 0};

    // Coefficient breakpoints inside the sweep, in traversal order.
    std::vector<double> stops;
    for (double t : pr.breakpoints())
        if ((dir > 0 && t > init.x && t < target) || (dir < 0 && t < init.x && t > target))
            stops.push_back(t);
    std::sort(stops.begin(), stops.end());
    if (dir < 0) std::reverse(stops.begin(), stops.end());
    stops.push_back(target);

    Vec y{init.u, init.u1};
    double x = init.x;
    std::size_t steps = 0;
    const double span = std::abs(target - init.x);
    double h = dir * span / 64.0;

    for (double stop : stops) {
        rhs.pin(0.5 * (x + stop));
        bool fsal_valid = false;
        Vec k1;
        while (dir * (stop - x) > 1e-14 * (1.0 + std::abs(x))) {
            if (++steps > opts.max_steps)
                fail_num("StepSizeUnderflow", "step budget exhausted (max_steps)");
            if (std::abs(h) > dir * (stop - x)) h = stop - x;
            if (!fsal_valid) {
                k1 = rhs(x, y);
                fsal_valid = true;
            }

            const Vec k2 = rhs(x + c2 * h, axpy(h * a21, k1, y));
            const Vec k3 = rhs(x + c3 * h, axpy(h * a32, k2, axpy(h * a31, k1, y)));
            const Vec k4 = rhs(x + c4 * h,
                               axpy(h * a43, k3, axpy(h * a42, k2, axpy(h * a41, k1, y))));
            const Vec k5 = rhs(x + c5 * h,
                               axpy(h * a54, k4,
                                    axpy(h * a53, k3, axpy(h * a52, k2, axpy(h * a51, k1, y)))));
            const Vec k6 = rhs(x + h, axpy(h * a65, k5,
                                           axpy(h * a64, k4,
                                                axpy(h * a63, k3,
                                                     axpy(h * a62, k2, axpy(h * a61, k1, y))))));
            const Vec y1 = axpy(h * a76, k6,
                                axpy(h * a75, k5,
                                     axpy(h * a74, k4, axpy(h * a73, k3, axpy(h * a71, k1, y)))));
            const Vec k7 = rhs(x + h, y1);

            bool ok = y1.finite() && k7.finite();
            double err = 0.0;
            if (ok) {
                const Vec ev = (k1 * e1 + k3 * e3 + k4 * e4 + k5 * e5 + k6 * e6 + k7 * e7) *
                               std::abs(h);
                const double sku =
                    opts.atol + opts.rtol * std::max(std::abs(y.u), std::abs(y1.u));
                const double skv =
                    opts.atol + opts.rtol * std::max(std::abs(y.v), std::abs(y1.v));
                err = std::sqrt(0.5 * (std::norm(ev.u) / (sku * sku) +
                                       std::norm(ev.v) / (skv * skv)));
                ok = std::isfinite(err) && err <= 1.0;
            }

            if (ok) {
                if (out.dense_) {
                    DenseSeg seg;
                    seg.x0 = x;
                    seg.h = h;
                    seg.r1 = y;
                    const Vec ydiff = y1 - y;
                    const Vec bspl = k1 * h - ydiff;
                    seg.r2 = ydiff;
                    seg.r3 = bspl;
                    seg.r4 = ydiff - k7 * h - bspl;
                    seg.r5 = (k1 * d1 + k3 * d3 + k4 * d4 + k5 * d5 + k6 * d6 + k7 * d7) * h;
                    out.segs_.push_back(seg);
                }
                x += h;
                y = y1;
                k1 = k7;  // FSAL
                const double fac =
                    err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
                h *= fac;
            } else {
                fsal_valid = true;  // k1 still valid at unchanged x
                const double fac =
                    std::isfinite(err) && err > 0
                        ? std::max(0.1, 0.9 * std::pow(err, -0.2))
                        : 0.25;
                h *= fac;
                if (std::abs(h) < 16.0 * 1e-16 * (1.0 + std::abs(x))) {
                    if (!y1.finite() || !k7.finite())
                        fail_num("NonFiniteState", "state became non-finite at x = " +
                                                       std::to_string(x));
                    fail_num("StepSizeUnderflow",
                             "step size underflow at x = " + std::to_string(x));
                }
            }
        }
        x = stop;  // snap
    }
    out.last_ = {x, y.u, y.v};
}

std::shared_ptr<RkTrajectory> integrate_impl(const Problem& pr, Complex z, QuasiState init,
                                             double x_target,
                                             const std::function<Complex(double)>& g,
                                             const IvpOptions& opts) {
    const double pad = 1e-12 * (1.0 + std::abs(pr.a()) + std::abs(pr.b()));
    if (init.x < pr.a() - pad || init.x > pr.b() + pad || x_target < pr.a() - pad ||
        x_target > pr.b() + pad)
        fail_pre("OutOfRange", "integration range must lie inside [a,b]");
    auto out = std::make_shared<RkTrajectory>(z, opts.dense);
    out->lo_ = std::min(init.x, x_target);
    out->hi_ = std::max(init.x, x_target);
    out->first_ = init;
    sweep(pr, z, init, x_target, g, opts, *out);
    if (init.x > x_target) std::swap(out->first_, out->last_);
    out->finalize();
    return out;
}

class ComboTrajectory final : public detail::TrajectoryImpl {
public:
    ComboTrajectory(Complex alpha, Trajectory a, Complex beta, Trajectory b)
        : alpha_(alpha), beta_(beta), a_(std::move(a)), b_(std::move(b)) {
        lo_ = std::max(a_.lo(), b_.valid() ? b_.lo() : a_.lo());
        hi_ = std::min(a_.hi(), b_.valid() ? b_.hi() : a_.hi());
        knots_ = a_.knots();
        if (b_.valid()) {
            const auto& kb = b_.knots();
            knots_.insert(knots_.end(), kb.begin(), kb.end());
            std::sort(knots_.begin(), knots_.end());
            knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
        }
    }

    Complex u(double x) const override {
        Complex v = alpha_ * a_.u(x);
        if (b_.valid()) v += beta_ * b_.u(x);
        return v;
    }
    Complex u1(double x) const override {
        Complex v = alpha_ * a_.u1(x);
        if (b_.valid()) v += beta_ * b_.u1(x);
        return v;
    }
    Complex z() const override { return a_.z(); }
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    const std::vector<double>& knots() const override { return knots_; }

private:
    Complex alpha_, beta_;
    Trajectory a_, b_;
    double lo_, hi_;
    std::vector<double> knots_;
};

// Merge of two directional sweeps from an interior anchor.
class MergedTrajectory final : public detail::TrajectoryImpl {
public:
    MergedTrajectory(Trajectory left, Trajectory right, double anchor)
        : left_(std::move(left)), right_(std::move(right)), anchor_(anchor) {
        knots_ = left_.knots();
        const auto& kr = right_.knots();
        knots_.insert(knots_.end(), kr.begin(), kr.end());
        std::sort(knots_.begin(), knots_.end());
        knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    }

    Complex u(double x) const override { return x < anchor_ ? left_.u(x) : right_.u(x); }
    Complex u1(double x) const override { return x < anchor_ ? left_.u1(x) : right_.u1(x); }
    Complex z() const override { return right_.z(); }
    double lo() const override { return left_.lo(); }
    double hi() const override { return right_.hi(); }
    const std::vector<double>& knots() const override { return knots_; }

private:
    Trajectory left_, right_;
    double anchor_;
    std::vector<double> knots_;
};

} // namespace

Complex Trajectory::u(double x) const { return impl_->u(x); }
Complex Trajectory::u1(double x) const { return impl_->u1(x); }
Complex Trajectory::z() const { return impl_->z(); }
double Trajectory::lo() const { return impl_->lo(); }
double Trajectory::hi() const { return impl_->hi(); }
const std::vector<double>& Trajectory::knots() const { return impl_->knots(); }

Trajectory Trajectory::combo(Complex alpha, const Trajectory& other, Complex beta) const {
    return Trajectory(std::make_shared<ComboTrajectory>(alpha, *this, beta, other));
}

Trajectory Trajectory::scaled(Complex alpha) const {
    return Trajectory(std::make_shared<ComboTrajectory>(alpha, *this, Complex(0), Trajectory()));
}

Trajectory integrate(const Problem& pr, Complex z, QuasiState init, double x_target,
                     const std::function<Complex(double)>& g, IvpOptions opts) {
    return Trajectory(integrate_impl(pr, z, init, x_target, g, opts));
}

Trajectory solve_across(const Problem& pr, Complex z, double c, Complex d1v, Complex d2v,
                        IvpOptions opts) {
    const QuasiState init{c, d1v, d2v};
    if (c <= pr.a()) return integrate(pr, z, init, pr.b(), {}, opts);
    if (c >= pr.b()) return integrate(pr, z, init, pr.a(), {}, opts);
    Trajectory left = integrate(pr, z, init, pr.a(), {}, opts);
    Trajectory right = integrate(pr, z, init, pr.b(), {}, opts);
    return Trajectory(std::make_shared<MergedTrajectory>(std::move(left), std::move(right), c));
}

std::pair<Trajectory, Trajectory> fundamental_system(const Problem& pr, Complex z, double c,
                                                     IvpOptions opts) {
    return {solve_across(pr, z, c, Complex(1), Complex(0), opts),
            solve_across(pr, z, c, Complex(0), Complex(1), opts)};
}

Complex wronskian(const Trajectory& f, const Trajectory& g, double x) {
    return f.u(x) * g.u1(x) - f.u1(x) * g.u(x);
}

double plucker_residual(const Trajectory& f1, const Trajectory& f2, const Trajectory& f3,
                        const Trajectory& f4, double x) {
    const Complex w12 = wronskian(f1, f2, x), w34 = wronskian(f3, f4, x);
    const Complex w13 = wronskian(f1, f3, x), w42 = wronskian(f4, f2, x);
    const Complex w14 = wronskian(f1, f4, x), w23 = wronskian(f2, f3, x);
    return std::abs(w12 * w34 + w13 * w42 + w14 * w23);
}

namespace {

// Trajectory assembled from the variation-of-parameters formula: cumulative
// integrals of u_j g r are precomputed at the fundamental system's knots and
// completed with one Kronrod panel per query. Owns copies of everything it
// needs, so it stays valid independently of the originating Problem.
class VopTrajectory final : public detail::TrajectoryImpl {
public:
    VopTrajectory(PiecewiseFn r, std::span<const double> problem_breaks, Trajectory u1t,
                  Trajectory u2t, std::function<Complex(double)> g, double c, Complex d1v,
                  Complex d2v)
        : u1t_(std::move(u1t)), u2t_(std::move(u2t)), r_(std::move(r)), g_(std::move(g)),
          d1_(d1v), d2_(d2v) {
        knots_ = u1t_.knots();
        knots_.insert(knots_.end(), problem_breaks.begin(), problem_breaks.end());
        std::sort(knots_.begin(), knots_.end());
        knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
        const std::size_t n = knots_.size();
        pre1_.assign(n, Complex(0));
        pre2_.assign(n, Complex(0));
        std::size_t ic = 0;
        while (ic + 1 < n && knots_[ic + 1] <= c) ++ic;
        pre1_[ic] = segment_int(u1t_, c, knots_[ic]);
        pre2_[ic] = segment_int(u2t_, c, knots_[ic]);
        for (std::size_t k = ic + 1; k < n; ++k) {
            pre1_[k] = pre1_[k - 1] + segment_int(u1t_, knots_[k - 1], knots_[k]);
            pre2_[k] = pre2_[k - 1] + segment_int(u2t_, knots_[k - 1], knots_[k]);
        }
        for (std::size_t k = ic; k-- > 0;) {
            pre1_[k] = pre1_[k + 1] + segment_int(u1t_, knots_[k + 1], knots_[k]);
            pre2_[k] = pre2_[k + 1] + segment_int(u2t_, knots_[k + 1], knots_[k]);
        }
    }

    Complex u(double x) const override {
        const auto [i1, i2] = integrals(x);
        return d1_ * u1t_.u(x) + d2_ * u2t_.u(x) + u1t_.u(x) * i2 - u2t_.u(x) * i1;
    }
    Complex u1(double x) const override {
        const auto [i1, i2] = integrals(x);
        return d1_ * u1t_.u1(x) + d2_ * u2t_.u1(x) + u1t_.u1(x) * i2 - u2t_.u1(x) * i1;
    }
    Complex z() const override { return u1t_.z(); }
    double lo() const override { return u1t_.lo(); }
    double hi() const override { return u1t_.hi(); }
    const std::vector<double>& knots() const override { return knots_; }

private:
    Complex segment_int(const Trajectory& w, double t0, double t1) const {
        if (t0 == t1) return Complex(0);
        return slq::quad_complex([&](double t) { return w.u(t) * g_(t) * r_(t); }, t0, t1, {},
                                 QuadOptions{1e-14, 10});
    }

    std::pair<Complex, Complex> integrals(double x) const {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        std::size_t k = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        if (k >= knots_.size()) k = knots_.size() - 1;
        Complex i1 = pre1_[k], i2 = pre2_[k];
        if (x != knots_[k]) {
            i1 += segment_int(u1t_, knots_[k], x);
            i2 += segment_int(u2t_, knots_[k], x);
        }
        return {i1, i2};
    }

    Trajectory u1t_, u2t_;
    PiecewiseFn r_;
    std::function<Complex(double)> g_;
    Complex d1_, d2_;
    std::vector<double> knots_;
    std::vector<Complex> pre1_, pre2_;
};

} // namespace

Trajectory variation_of_parameters(const Problem& pr, Complex z,
                                   const std::function<Complex(double)>& g, double c, Complex d1v,
                                   Complex d2v, IvpOptions opts) {
    auto [w1, w2] = fundamental_system(pr, z, c, opts);
    return Trajectory(std::make_shared<VopTrajectory>(pr.r_fn(), pr.breakpoints(), std::move(w1),
                                                      std::move(w2), g, c, d1v, d2v));
}

TransferMatrix transfer_matrix(const Problem& pr, Complex z, IvpOptions opts) {
    opts.dense = false;
    const Trajectory t1 = integrate(pr, z, {pr.a(), Complex(1), Complex(0)}, pr.b(), {}, opts);
    const Trajectory t2 = integrate(pr, z, {pr.a(), Complex(0), Complex(1)}, pr.b(), {}, opts);
    TransferMatrix T;
    T.z = z;
    T.m = {t1.u(pr.b()), t2.u(pr.b()), t1.u1(pr.b()), t2.u1(pr.b())};
    return T;
}

} // namespace slq
