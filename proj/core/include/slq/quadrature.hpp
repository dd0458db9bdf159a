#pragma once

#include <complex>
#include <functional>
#include <span>

namespace slq {

struct QuadOptions {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

// Adaptive Gauss7/Kronrod15 on [x0,x1] (x0 <= x1 required by callers that
// care about orientation; reversed limits negate). Panels are pre-split at
// every breakpoint inside the range; integrands are only evaluated at
// interior nodes. Throws Error("NonConvergent") past max_depth.
double quad(const std::function<double(double)>& f, double x0, double x1,
            std::span<const double> breakpoints = {}, QuadOptions opts = {});

std::complex<double> quad_complex(const std::function<std::complex<double>(double)>& f,
                                  double x0, double x1,
                                  std::span<const double> breakpoints = {},
                                  QuadOptions opts = {});

} // namespace slq
