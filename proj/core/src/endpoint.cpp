#include "slq/endpoint.hpp"

#include <algorithm>
#include <cmath>

#include "slq/errors.hpp"
#include "slq/ivp.hpp"

namespace slq {

const char* to_string(EndpointKind k) {
    switch (k) {
        case EndpointKind::Regular: return "Regular";
        case EndpointKind::LimitCircle: return "LimitCircle";
        case EndpointKind::LimitPoint: return "LimitPoint";
        case EndpointKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

// Truncation points approaching the endpoint by halving the remaining
// distance from the interval midpoint.
std::vector<double> distance_windows(double anchor, double endpoint, int n) {
    std::vector<double> pts;
    for (int k = 1; k <= n; ++k)
        pts.push_back(endpoint - (endpoint - anchor) * std::pow(2.0, -k));
    return pts;
}

// Coordinate-doubling points; meaningful when the endpoint coordinate is
// orders of magnitude beyond the rest of the interval (a truncated half
// line). Returns empty when that reading does not apply.
std::vector<double> coordinate_windows(double other_end, double endpoint, int n) {
    const double far = std::abs(endpoint);
    const double near = std::max(1.0, std::abs(other_end));
    if (far < 64.0 * near) return {};
    std::vector<double> pts;
    for (int k = n - 1; k >= 1; --k) {
        const double t = endpoint * std::pow(2.0, -k);
        if ((endpoint > other_end && t > other_end) || (endpoint < other_end && t < other_end))
            pts.push_back(t);
    }
    pts.push_back(endpoint - (endpoint - other_end) * std::pow(2.0, -20));
    return pts;
}

} // namespace

// Cumulative integrals of a nonnegative integrand from the family's first
// truncation point toward the endpoint. Works for either endpoint side; the
// magnitude of each oriented panel is accumulated.
WindowEvidence tail_window_scan(const Problem& pr, const std::string& label,
                                const std::function<double(double)>& f,
                                const std::vector<double>& pts, ClassifyOptions opts,
                                std::span<const double> extra_breaks) {
    WindowEvidence ev;
    ev.label = label;
    ev.points = pts;
    if (pts.size() < 2) {
        ev.failed = true;
        return ev;
    }
    std::vector<double> cuts(pr.breakpoints().begin(), pr.breakpoints().end());
    cuts.insert(cuts.end(), extra_breaks.begin(), extra_breaks.end());
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    double from = pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double t = pts[i];
        try {
            QuadOptions q;
            q.abs_tol = 1e-8 * (1.0 + std::abs(t - pts.front()));
            q.max_depth = 32;
            acc += std::abs(quad(f, from, t, cuts, q));
        } catch (const Error&) {
            ev.failed = true;
            return ev;
        }
        ev.integrals.push_back(acc);
        from = t;
    }
    const std::size_t n = ev.integrals.size();
    if (n >= 4) {
        const double last = ev.integrals[n - 1];
        const double ref = ev.integrals[n - 4];
        if (ref > 0 && last / ref >= opts.growth_factor) ev.diverging = true;
        if (std::abs(last - ref) <= opts.settle_rel * (std::abs(last) + 1e-12))
            ev.stabilized = true;
    }
    return ev;
}

namespace {

struct Verdict {
    bool diverging = false;
    bool stabilized = false;
};

Verdict merge(const std::vector<WindowEvidence>& evs) {
    Verdict v;
    bool all_stable = true;
    bool any = false;
    for (const auto& e : evs) {
        if (e.failed) {
            all_stable = false;
            continue;
        }
        any = true;
        if (e.diverging) v.diverging = true;
        if (!e.stabilized) all_stable = false;
    }
    v.stabilized = any && all_stable && !v.diverging;
    return v;
}

// Count sign changes of Re u on (x0, x1), sampling a few points per knot
// interval.
int count_zeros(const Trajectory& t, double x0, double x1) {
    if (x1 <= x0) return 0;
    int count = 0;
    double prev_x = x0;
    double prev_v = t.u(x0).real();
    auto scan_to = [&](double x) {
        const int sub = 6;
        for (int i = 1; i <= sub; ++i) {
            const double xx = prev_x + (x - prev_x) * i / sub;
            const double vv = t.u(xx).real();
            if ((prev_v < 0 && vv > 0) || (prev_v > 0 && vv < 0)) ++count;
            if (vv != 0) prev_v = vv;
        }
        prev_x = x;
    };
    for (double k : t.knots()) {
        if (k <= x0) continue;
        if (k >= x1) break;
        scan_to(k);
    }
    scan_to(x1);
    return count;
}

} // namespace

EndpointClass classify_endpoint(const Problem& pr, EndpointSide side, double z0,
                                ClassifyOptions opts) {
    EndpointClass out;
    out.side = side;
    out.z0 = z0;

    const bool declared = side == EndpointSide::A ? pr.singular_a() : pr.singular_b();
    if (!declared) {
        out.kind = EndpointKind::Regular;
        out.note = "endpoint not declared singular";
        return out;
    }

    const double endpoint = side == EndpointSide::A ? pr.a() : pr.b();
    const double other = side == EndpointSide::A ? pr.b() : pr.a();
    const double anchor = 0.5 * (pr.a() + pr.b());

    std::vector<std::vector<double>> families;
    if (!opts.window_points.empty()) {
        families.push_back(opts.window_points);
    } else {
        families.push_back(distance_windows(anchor, endpoint, opts.windows));
        auto coord = coordinate_windows(other, endpoint, opts.windows);
        if (!coord.empty()) families.push_back(coord);
    }

    // 1. coefficient tails
    auto coeff_weight = [&pr](double x) {
        return std::abs(1.0 / pr.p(x)) + std::abs(pr.q(x)) + std::abs(pr.r(x)) +
               std::abs(pr.s(x));
    };
    for (const auto& fam : families)
        out.coefficient_tails.push_back(
            tail_window_scan(pr, "|1/p|+|q|+|r|+|s|", coeff_weight, fam, opts));
    const Verdict coeff = merge(out.coefficient_tails);
    if (coeff.stabilized) {
        out.kind = EndpointKind::Regular;
        out.note = "all coefficient tail integrals settle";
        return out;
    }

    // 2. integrate two independent solutions of (tau - z0) u = 0 toward the
    // endpoint, covering every window point of every family.
    double farthest = anchor, launch = anchor;
    for (const auto& fam : families)
        for (double t : fam) {
            if (side == EndpointSide::B) {
                farthest = std::max(farthest, t);
                launch = std::min(launch, t);
            } else {
                farthest = std::min(farthest, t);
                launch = std::max(launch, t);
            }
        }
    IvpOptions iopts;
    iopts.rtol = 1e-8;
    iopts.atol = 1e-12;
    Trajectory u1, u2;
    bool have_solutions = true;
    try {
        u1 = integrate(pr, Complex(z0, 0.0), {launch, Complex(1), Complex(0)}, farthest, {},
                       iopts);
        u2 = integrate(pr, Complex(z0, 0.0), {launch, Complex(0), Complex(1)}, farthest, {},
                       iopts);
    } catch (const Error&) {
        have_solutions = false;
    }

    Verdict l2_1, l2_2;
    if (have_solutions) {
        for (const auto& fam : families) {
            out.solution_l2.push_back(tail_window_scan(
                pr, "int |u_1|^2 r",
                [&](double x) { return std::norm(u1.u(x)) * pr.r(x); }, fam, opts,
                u1.knots()));
            out.solution_l2.push_back(tail_window_scan(
                pr, "int |u_2|^2 r",
                [&](double x) { return std::norm(u2.u(x)) * pr.r(x); }, fam, opts,
                u2.knots()));
        }
        std::vector<WindowEvidence> e1, e2;
        for (std::size_t i = 0; i < out.solution_l2.size(); ++i)
            (i % 2 == 0 ? e1 : e2).push_back(out.solution_l2[i]);
        l2_1 = merge(e1);
        l2_2 = merge(e2);
        if (l2_1.stabilized && l2_2.stabilized) {
            out.kind = EndpointKind::LimitCircle;
            out.note = "both solutions at z0 have settling tail L2(r) integrals";
            return out;
        }
    }

    // 3. limit point: Hartman-Rellich divergence with non-oscillation, or a
    // solution with diverging L2(r) tail (Weyl alternative).
    auto hr = [&pr](double x) { return std::sqrt(std::abs(pr.r(x) / pr.p(x))); };
    for (const auto& fam : families)
        out.hartman_rellich.push_back(tail_window_scan(pr, "int |r/p|^(1/2)", hr, fam, opts));
    const Verdict hrv = merge(out.hartman_rellich);

    if (have_solutions) {
        // zero accumulation: zeros of u1 in the last two window annuli
        const auto& fam = families.front();
        int tail_zeros = 0;
        if (fam.size() >= 3) {
            const double t0 = fam[fam.size() - 3], t2 = fam.back();
            tail_zeros = side == EndpointSide::B ? count_zeros(u1, t0, t2)
                                                 : count_zeros(u1, t2, t0);
        }
        out.non_oscillatory = tail_zeros == 0;
    }

    const bool weyl_lp = (l2_1.diverging || l2_2.diverging);
    if ((hrv.diverging && out.non_oscillatory.value_or(false)) || weyl_lp) {
        out.kind = EndpointKind::LimitPoint;
        out.note = weyl_lp ? "a solution at z0 has a diverging tail L2(r) integral"
                           : "Hartman-Rellich integral diverges and tau - z0 is non-oscillatory";
        return out;
    }

    out.kind = EndpointKind::Inconclusive;
    out.note = "window evidence neither settles nor diverges decisively";
    return out;
}

} // namespace slq
