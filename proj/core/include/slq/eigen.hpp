#pragma once

#include <optional>
#include <vector>

#include "slq/boundary.hpp"
#include "slq/endpoint.hpp"
#include "slq/ivp.hpp"
#include "slq/problem.hpp"

namespace slq {

struct Eigenpair {
    double lambda = 0.0;
    int multiplicity = 1;
    std::vector<Trajectory> funcs;     // r-normalized; orthonormal pair when mult 2
    std::optional<int> osc_index;      // interior zero count (separated only)
    double bc_residual_norm = 0.0;     // max residual component over eigenfunctions
    double norm_defect = 0.0;          // | ||u||_r^2 - 1 | after normalization
};

struct EigenOptions {
    double d_tol = 1e-10;            // characteristic value at an accepted root
    double lambda_rel_tol = 1e-9;    // root tolerance 1e-9 * (1 + |lambda|)
    double coincidence_tol = 1e-7;   // coupled multiplicity-2 matrix coincidence
    int max_grid_refine = 16;        // WindowTooCoarse beyond this
    double zero_cluster_tol = 1e-10; // ZeroClusterUnresolved below this separation
    IvpOptions ivp{};
};

// Characteristic function of the separated problem: D(lambda) is the
// phi_b-boundary functional of the solution launched with the phi_a data
// (u, u^[1])(a) = (sin phi_a, cos phi_a), renormalized to unit endpoint
// scale. Zeros are exactly the eigenvalues.
double char_separated(const Problem& pr, double phi_a, double phi_b, double lambda,
                      EigenOptions opts = {});

// All eigenvalues in [lo, hi], sorted. Separated roots are bracketed by sign
// changes on an oscillation-count-guarded adaptive grid; coupled roots come
// from sign changes and |Delta| minima of the discriminant, with
// multiplicity 2 exactly on full matrix coincidence e^{i phi} R = T(lambda).
std::vector<Eigenpair> eigenvalues(const Problem& pr, const BoundaryCondition& bc, double lo,
                                   double hi, EigenOptions opts = {});

// First n eigenvalues (counted with multiplicity) above an automatically
// expanded lower search bound.
std::vector<Eigenpair> eigenvalues_count(const Problem& pr, const BoundaryCondition& bc, int n,
                                         EigenOptions opts = {});

// Number of interior zeros of the solution launched with the phi_a data.
int oscillation_count(const Problem& pr, double phi_a, double lambda, EigenOptions opts = {});

// Refined interior zeros of Re u on (x0, x1); throws ZeroClusterUnresolved
// when two zeros collide below cluster_tol.
std::vector<double> interior_zeros(const Trajectory& t, double x0, double x1,
                                   double cluster_tol = 1e-10);

// Smallest eigenvalue, with the separated-case certificate that the
// oscillation count vanishes just below it.
double lower_bound(const Problem& pr, const BoundaryCondition& bc, EigenOptions opts = {});

struct PrincipalPair {
    double lambda = 0.0;
    EndpointSide side = EndpointSide::B;
    Trajectory principal;      // u0 = u * int_x^b dt/(p u^2); u0 -> 0 at the endpoint
    Trajectory nonprincipal;   // u1 = u * int_{x0}^x dt/(p u^2)
    WindowEvidence principal_tail;     // int dt/(p u0^2): expected diverging
    WindowEvidence nonprincipal_tail;  // int dt/(p u1^2): expected settling
};

// Principal/non-principal pair at a non-oscillatory endpoint, built from a
// zero-free solution launched at x0 with (u, u^[1]) = (1, 0).
PrincipalPair principal_solution(const Problem& pr, double lambda, EndpointSide side, double x0,
                                 EigenOptions opts = {});

} // namespace slq
