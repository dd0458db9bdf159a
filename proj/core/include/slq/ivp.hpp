#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "slq/mat2.hpp"
#include "slq/problem.hpp"

namespace slq {

// State of the first-order system equivalent to (tau - z) f = g:
//   (u, u^[1])' = [[-s, 1/p], [q - z r, s]] (u, u^[1]) - (0, r g),
// where u^[1] = p (u' + s u) is the quasi-derivative.
struct QuasiState {
    double x = 0.0;
    Complex u{};
    Complex u1{};  // u^[1]
};

struct IvpOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    bool dense = true;                  // keep dense-output segments
    std::size_t max_steps = 1'000'000;  // hard cap
};

namespace detail {
class TrajectoryImpl {
public:
    virtual ~TrajectoryImpl() = default;
    virtual Complex u(double x) const = 0;
    virtual Complex u1(double x) const = 0;
    virtual Complex z() const = 0;
    virtual double lo() const = 0;
    virtual double hi() const = 0;
    virtual const std::vector<double>& knots() const = 0;
};
} // namespace detail

// Value handle for a solution of (tau - z) f = g on a subinterval of [a,b],
// queryable for (u, u^[1]) at any covered x. Immutable and cheap to copy.
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(std::shared_ptr<const detail::TrajectoryImpl> impl)
        : impl_(std::move(impl)) {}

    Complex u(double x) const;
    Complex u1(double x) const;
    QuasiState at(double x) const { return {x, u(x), u1(x)}; }

    Complex z() const;
    double lo() const;
    double hi() const;
    // Ascending accepted-step knots; quadrature over trajectory data splits here.
    const std::vector<double>& knots() const;

    bool valid() const { return impl_ != nullptr; }

    // alpha*this + beta*other (same problem and z).
    Trajectory combo(Complex alpha, const Trajectory& other, Complex beta) const;
    Trajectory scaled(Complex alpha) const;

private:
    std::shared_ptr<const detail::TrajectoryImpl> impl_;
};

// Integrate from init.x to x_target (either direction); steps never straddle
// a coefficient breakpoint. Throws StepSizeUnderflow / NonFiniteState.
Trajectory integrate(const Problem& pr, Complex z, QuasiState init, double x_target,
                     const std::function<Complex(double)>& g = {}, IvpOptions opts = {});

// Fundamental system normalized at c: u1(c)=u2^[1](c)=1, u1^[1](c)=u2(c)=0,
// each covering all of [a,b]; W(u1,u2) = 1 everywhere.
std::pair<Trajectory, Trajectory> fundamental_system(const Problem& pr, Complex z, double c,
                                                     IvpOptions opts = {});

// Solution with the given data at c covering [a,b] (two sweeps from c).
Trajectory solve_across(const Problem& pr, Complex z, double c, Complex d1, Complex d2,
                        IvpOptions opts = {});

// Modified Wronskian W(f,g)(x) = f g^[1] - f^[1] g.
Complex wronskian(const Trajectory& f, const Trajectory& g, double x);

// |W(f1,f2)W(f3,f4) + W(f1,f3)W(f4,f2) + W(f1,f4)W(f2,f3)| at x.
double plucker_residual(const Trajectory& f1, const Trajectory& f2, const Trajectory& f3,
                        const Trajectory& f4, double x);

// Inhomogeneous solution with f(c)=d1, f^[1](c)=d2 assembled from the
// variation-of-parameters formula (quadrature against a fundamental system,
// no re-integration).
Trajectory variation_of_parameters(const Problem& pr, Complex z,
                                   const std::function<Complex(double)>& g, double c, Complex d1,
                                   Complex d2, IvpOptions opts = {});

struct TransferMatrix {
    Complex z;
    Mat2c m;  // (u(b), u^[1](b))^T = m (u(a), u^[1](a))^T ; det = 1
};

TransferMatrix transfer_matrix(const Problem& pr, Complex z, IvpOptions opts = {});

} // namespace slq
