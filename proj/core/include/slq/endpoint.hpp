#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slq/problem.hpp"

namespace slq {

enum class EndpointSide { A, B };
enum class EndpointKind { Regular, LimitCircle, LimitPoint, Inconclusive };

// Cumulative integrals of one integrand along a sequence of truncation
// points approaching the endpoint. `diverging` means the value kept growing
// by the configured factor across the last three windows, `stabilized` means
// it settled; neither flag set is an honest "can't tell".
struct WindowEvidence {
    std::string label;
    std::vector<double> points;     // truncation points, in traversal order
    std::vector<double> integrals;  // cumulative from the anchor
    bool diverging = false;
    bool stabilized = false;
    bool failed = false;            // quadrature/integration failure
};

struct EndpointClass {
    EndpointSide side = EndpointSide::B;
    EndpointKind kind = EndpointKind::Inconclusive;
    double z0 = 0.0;
    // evidence (empty when the declared-singular flag was off)
    std::vector<WindowEvidence> coefficient_tails;  // |1/p|+|q|+|r|+|s|
    std::vector<WindowEvidence> solution_l2;        // int |u_j|^2 r for two solutions
    std::vector<WindowEvidence> hartman_rellich;    // int |r/p|^(1/2)
    std::optional<bool> non_oscillatory;            // no zero accumulation detected
    std::string note;
};

struct ClassifyOptions {
    int windows = 8;            // truncation points per family
    double growth_factor = 2.0; // divergence: I_k / I_{k-3} >= this
    // stabilized when relative growth over the last three windows is below
    // this; 0.08 leaves headroom over the ~5.5% geometric tail a bounded
    // integrand shows after 8 halving windows
    double settle_rel = 0.08;
    // explicit truncation points override the built-in window families
    std::vector<double> window_points;
};

// Numerical endpoint classification. Declared-regular endpoints return
// Regular immediately. Otherwise: Regular if all coefficient tails settle;
// LimitCircle if both solutions of (tau - z0)u = 0 have settling tail
// L2(r)-integrals; LimitPoint if the Hartman-Rellich integral diverges while
// the solution is non-oscillatory toward the endpoint, or if some solution's
// tail L2(r)-integral diverges (Weyl alternative); Inconclusive otherwise.
EndpointClass classify_endpoint(const Problem& pr, EndpointSide side, double z0 = 0.0,
                                ClassifyOptions opts = {});

// The shared window protocol: cumulative integrals of a nonnegative
// integrand from the first truncation point toward the endpoint. Also used
// for the principal-solution convergence split.
WindowEvidence tail_window_scan(const Problem& pr, const std::string& label,
                                const std::function<double(double)>& f,
                                const std::vector<double>& points, ClassifyOptions opts = {},
                                std::span<const double> extra_breaks = {});

const char* to_string(EndpointKind k);

} // namespace slq
