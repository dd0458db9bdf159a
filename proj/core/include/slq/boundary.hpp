#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slq/ivp.hpp"
#include "slq/mat2.hpp"

namespace slq {

// Separated self-adjoint condition, one angle per endpoint:
//   u(a) cos(phi_a) - u^[1](a) sin(phi_a) = 0   (and likewise at b).
// phi = 0 is Dirichlet, phi = pi/2 is the natural Neumann-type condition.
struct SeparatedBC {
    double phi_a = 0.0;
    double phi_b = 0.0;
};

// Coupled self-adjoint condition
//   (u(b), u^[1](b))^T = e^{i phi} R (u(a), u^[1](a))^T,  R in SL2(R).
// Real exactly when phi = 0 (periodic R = I, antiperiodic R = -I).
struct CoupledBC {
    double phi = 0.0;
    Mat2d R = Mat2d::identity();
};

using BoundaryCondition = std::variant<SeparatedBC, CoupledBC>;

// Named shortcuts plus full JSON parsing:
//   {"type":"separated","phi_a":..,"phi_b":..}
//   {"type":"coupled","phi":..,"R":[[r11,r12],[r21,r22]]}
// Angles outside [0,pi) are reduced mod pi with a warning appended.
BoundaryCondition bc_from_json(std::string_view text,
                               std::vector<std::string>* warnings = nullptr);
std::string bc_to_json(const BoundaryCondition& bc);

// Validated separated/coupled constructors (det R checked to 1e-12).
BoundaryCondition make_separated(double phi_a, double phi_b,
                                 std::vector<std::string>* warnings = nullptr);
BoundaryCondition make_coupled(double phi, Mat2d R,
                               std::vector<std::string>* warnings = nullptr);

// Boundary residual of endpoint data; zero for functions in dom(S).
std::array<Complex, 2> bc_residual(const BoundaryCondition& bc, const QuasiState& at_a,
                                   const QuasiState& at_b);

// General matrix-pair parametrization B_a (u(a),u^[1](a))^T = B_b (...b...),
// admissible iff rank(B_a|B_b) = 2 and B_a J B_a^* = B_b J B_b^*.
struct MatrixPairBC {
    Mat2c Ba, Bb;
};

MatrixPairBC validate_matrix_pair(const Mat2c& Ba, const Mat2c& Bb);

// Real scalar whose zeros on the real axis are exactly the eigenvalues of
// the coupled problem: Delta(lambda) = tr(adj(R) T(lambda)) - 2 cos(phi).
double coupled_discriminant(const Problem& pr, const CoupledBC& bc, double lambda,
                            IvpOptions opts = {});

bool is_real_coupling(const BoundaryCondition& bc);

} // namespace slq
