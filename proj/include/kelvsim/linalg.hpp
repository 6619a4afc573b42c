#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace kelvsim {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;

// Row-major 3x3 real matrix.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 zero() { return Mat3{}; }
    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
};

// Row-major 3x3 complex matrix.
struct CMat3 {
    std::array<Complex, 9> a{};

    Complex& operator()(int i, int j) { return a[3 * i + j]; }
    Complex operator()(int i, int j) const { return a[3 * i + j]; }

    static CMat3 identity() {
        CMat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
};

// ---- vector ops -------------------------------------------------------

inline Vec3 operator+(const Vec3& x, const Vec3& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }
inline Vec3 operator-(const Vec3& x, const Vec3& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }
inline Vec3 operator*(double s, const Vec3& x) { return {s * x[0], s * x[1], s * x[2]}; }
inline Vec3 operator-(const Vec3& x) { return {-x[0], -x[1], -x[2]}; }

inline CVec3 operator+(const CVec3& x, const CVec3& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }
inline CVec3 operator-(const CVec3& x, const CVec3& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }
inline CVec3 operator*(Complex s, const CVec3& x) { return {s * x[0], s * x[1], s * x[2]}; }
inline CVec3 operator*(double s, const CVec3& x) { return {s * x[0], s * x[1], s * x[2]}; }
inline CVec3 operator-(const CVec3& x) { return {-x[0], -x[1], -x[2]}; }

inline CVec3 to_complex(const Vec3& x) { return {Complex(x[0]), Complex(x[1]), Complex(x[2])}; }
inline Vec3 real_part(const CVec3& x) { return {x[0].real(), x[1].real(), x[2].real()}; }
inline Vec3 imag_part(const CVec3& x) { return {x[0].imag(), x[1].imag(), x[2].imag()}; }
inline CVec3 conj(const CVec3& x) { return {std::conj(x[0]), std::conj(x[1]), std::conj(x[2])}; }

inline double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

// Bilinear (non-conjugating) dot products; the incompressibility constraint
// k . v and all contraction terms are bilinear, not Hermitian.
inline Complex dot(const Vec3& x, const CVec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }
inline Complex dot(const CVec3& x, const CVec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

// Hermitian inner product <x, y> = sum conj(x_i) y_i.
inline Complex inner(const CVec3& x, const CVec3& y) {
    return std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1] + std::conj(x[2]) * y[2];
}

inline double norm2(const Vec3& x) { return dot(x, x); }
inline double norm(const Vec3& x) { return std::sqrt(norm2(x)); }
inline double norm2(const CVec3& x) { return std::norm(x[0]) + std::norm(x[1]) + std::norm(x[2]); }
inline double norm(const CVec3& x) { return std::sqrt(norm2(x)); }

// ---- matrix ops -------------------------------------------------------

inline Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}
inline Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}
inline Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
    return r;
}
inline Mat3 operator-(const Mat3& x) { return -1.0 * x; }

inline Mat3 transpose(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

inline double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

inline Mat3 matmul(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
    return r;
}

// y = M x
inline Vec3 matvec(const Mat3& m, const Vec3& x) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * x[0] + m(i, 1) * x[1] + m(i, 2) * x[2];
    return r;
}
inline CVec3 matvec(const Mat3& m, const CVec3& x) {
    CVec3 r;
    for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * x[0] + m(i, 1) * x[1] + m(i, 2) * x[2];
    return r;
}

// y = x^T M  (row vector contraction, component n: sum_m x_m M_mn)
inline Vec3 vecmat(const Vec3& x, const Mat3& m) {
    Vec3 r;
    for (int j = 0; j < 3; ++j) r[j] = x[0] * m(0, j) + x[1] * m(1, j) + x[2] * m(2, j);
    return r;
}

inline Mat3 outer(const Vec3& x, const Vec3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x[i] * y[j];
    return r;
}

inline double frobenius_norm(const Mat3& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const Mat3& m) {
    double s = 0.0;
    for (double v : m.a) s = std::max(s, std::abs(v));
    return s;
}

inline double det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Complex det(const CMat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline CMat3 to_complex(const Mat3& m) {
    CMat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = m.a[i];
    return r;
}

// ---- dense solvers / decompositions ------------------------------------

// Solve M x = b by Gaussian elimination with partial pivoting.
// T is double or Complex (M stays real). Throws std::domain_error if singular.
template <class T>
std::array<T, 3> solve3(const Mat3& m, const std::array<T, 3>& b);

// Matrix exponential by scaling-and-squaring with a Taylor series.
Mat3 expm(const Mat3& m);

// Eigenvalues of a real / complex 3x3 matrix via the trace-shifted
// characteristic cubic (Cardano in complex arithmetic, Newton-polished).
// Order is unspecified.
std::array<Complex, 3> eigenvalues(const Mat3& m);
std::array<Complex, 3> eigenvalues(const CMat3& m);

}  // namespace kelvsim
