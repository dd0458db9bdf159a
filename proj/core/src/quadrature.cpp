#include "slq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "slq/errors.hpp"

namespace slq {
namespace {

// Kronrod-15 abscissae and weights, with the embedded Gauss-7 weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class T>
Panel<T> gk15(const std::function<T(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    T resk = kWgk[7] * fv[7];
    T resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return Panel<T>{a, b, resk * h, std::abs(resk - resg) * std::abs(h), depth};
}

template <class T>
T adaptive(const std::function<T(double)>& f, double x0, double x1,
           std::span<const double> breakpoints, QuadOptions opts) {
    if (x0 == x1) return T(0);
    double sign = 1.0;
    if (x1 < x0) {
        std::swap(x0, x1);
        sign = -1.0;
    }

    std::vector<double> cuts{x0};
    for (double t : breakpoints)
        if (t > x0 && t < x1) cuts.push_back(t);
    cuts.push_back(x1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel<T>> queue;
    T total(0);
    double total_err = 0.0;
    auto push = [&](Panel<T> p) {
        total += p.value;
        total_err += p.err;
        queue.push(std::move(p));
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        push(gk15<T>(f, cuts[i], cuts[i + 1], 0));

    while (total_err > opts.abs_tol && !queue.empty()) {
        Panel<T> p = queue.top();
        queue.pop();
        if (p.err <= 0 || p.b - p.a <= 0) continue;
        if (p.depth >= opts.max_depth)
            fail_num("NonConvergent",
                     "quadrature stalled at depth " + std::to_string(p.depth) +
                         " with residual error " + std::to_string(total_err));
        total -= p.value;
        total_err -= p.err;
        const double mid = 0.5 * (p.a + p.b);
        push(gk15<T>(f, p.a, mid, p.depth + 1));
        push(gk15<T>(f, mid, p.b, p.depth + 1));
    }
    return total * sign;
}

} // namespace

double quad(const std::function<double(double)>& f, double x0, double x1,
            std::span<const double> breakpoints, QuadOptions opts) {
    return adaptive<double>(f, x0, x1, breakpoints, opts);
}

std::complex<double> quad_complex(const std::function<std::complex<double>(double)>& f,
                                  double x0, double x1,
                                  std::span<const double> breakpoints, QuadOptions opts) {
    return adaptive<std::complex<double>>(f, x0, x1, breakpoints, opts);
}

} // namespace slq
