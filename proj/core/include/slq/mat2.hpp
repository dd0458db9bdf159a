#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace slq {

using Complex = std::complex<double>;

// Small fixed 2x2 matrix, row major. Everything here is used on boundary
// data and transfer matrices, so no linear-algebra library is warranted.
template <class T>
struct Mat2 {
    T a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

    T det() const { return a11 * a22 - a12 * a21; }
    T trace() const { return a11 + a22; }

    // adj(A) * A = det(A) * I
    Mat2 adjugate() const { return {a22, -a12, -a21, a11}; }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(const T& s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    std::array<T, 2> apply(const std::array<T, 2>& v) const {
        return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
    }
};

using Mat2d = Mat2<double>;
using Mat2c = Mat2<Complex>;

inline Mat2c to_complex(const Mat2d& m) {
    return {Complex(m.a11), Complex(m.a12), Complex(m.a21), Complex(m.a22)};
}

inline double frobenius_norm(const Mat2c& m) {
    return std::sqrt(std::norm(m.a11) + std::norm(m.a12) + std::norm(m.a21) + std::norm(m.a22));
}

inline double frobenius_norm(const Mat2d& m) {
    return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

// Singular values of a real 2x2, largest first.
inline std::array<double, 2> singular_values(const Mat2d& m) {
    const double t = m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22;
    const double d = m.det();
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
    const double s1 = std::sqrt(std::max(0.0, (t + disc) / 2.0));
    const double s2 = std::sqrt(std::max(0.0, (t - disc) / 2.0));
    return {s1, s2};
}

} // namespace slq
