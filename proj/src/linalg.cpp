#include "kelvsim/linalg.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kelvsim {

template <class T>
std::array<T, 3> solve3(const Mat3& m, const std::array<T, 3>& b) {
    double lu[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) lu[i][j] = m(i, j);
    std::array<T, 3> x = b;
    int perm[3] = {0, 1, 2};

    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(lu[r][col]) > std::abs(lu[piv][col])) piv = r;
        if (std::abs(lu[piv][col]) == 0.0) throw std::domain_error("solve3: singular matrix");
        if (piv != col) {
            std::swap(lu[piv], lu[col]);
            std::swap(x[piv], x[col]);
            std::swap(perm[piv], perm[col]);
        }
        for (int r = col + 1; r < 3; ++r) {
            const double f = lu[r][col] / lu[col][col];
            lu[r][col] = f;
            for (int c = col + 1; c < 3; ++c) lu[r][c] -= f * lu[col][c];
            x[r] -= f * x[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        for (int c = r + 1; c < 3; ++c) x[r] -= lu[r][c] * x[c];
        x[r] /= lu[r][r];
    }
    return x;
}

template std::array<double, 3> solve3<double>(const Mat3&, const std::array<double, 3>&);
template std::array<Complex, 3> solve3<Complex>(const Mat3&, const std::array<Complex, 3>&);

Mat3 expm(const Mat3& m) {
    // Scale so the Taylor series converges fast, then square back.
    const double nrm = frobenius_norm(m);
    int squarings = 0;
    double scale = 1.0;
    while (nrm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Mat3 ms = scale * m;

    Mat3 result = Mat3::identity();
    Mat3 term = Mat3::identity();
    for (int n = 1; n <= 24; ++n) {
        term = (1.0 / n) * matmul(term, ms);
        result = result + term;
        if (max_abs(term) < std::numeric_limits<double>::epsilon() * max_abs(result)) break;
    }
    for (int i = 0; i < squarings; ++i) result = matmul(result, result);
    return result;
}

std::array<Complex, 3> eigenvalues(const CMat3& m) {
    // Shift by tr/3 before solving: the depressed cubic of the shifted matrix
    // is formed without large-scale cancellation, so clustered eigenvalues
    // (e.g. a monodromy near the identity) come out at full absolute accuracy
    // instead of the eps^(1/3) noise of the raw characteristic polynomial.
    const Complex mu = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
    CMat3 e = m;
    e(0, 0) -= mu;
    e(1, 1) -= mu;
    e(2, 2) -= mu;

    Complex tr2(0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tr2 += e(i, j) * e(j, i);
    const Complex p = -0.5 * tr2;  // char poly of e: y^3 + p y + q
    const Complex q = -det(e);

    std::array<Complex, 3> roots;
    const Complex disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);
    Complex u3 = -0.5 * q + disc;
    const Complex u3b = -0.5 * q - disc;
    if (std::abs(u3b) > std::abs(u3)) u3 = u3b;
    if (std::abs(u3) == 0.0) {
        roots = {Complex(0.0), Complex(0.0), Complex(0.0)};
    } else {
        const Complex u = std::pow(u3, 1.0 / 3.0);
        const Complex w(-0.5, 0.5 * std::sqrt(3.0));
        Complex uk = u;
        for (int i = 0; i < 3; ++i) {
            roots[i] = uk - p / (3.0 * uk);
            uk *= w;
        }
        for (Complex& r : roots) {
            for (int it = 0; it < 3; ++it) {
                const Complex f = (r * r + p) * r + q;
                const Complex fp = 3.0 * r * r + p;
                if (std::abs(fp) == 0.0) break;
                const Complex step = f / fp;
                if (std::abs(step) > 0.5 * std::abs(r) + 1e-300) break;
                r -= step;
                if (std::abs(step) <= 1e-30 + 1e-16 * std::abs(r)) break;
            }
        }
    }
    return {roots[0] + mu, roots[1] + mu, roots[2] + mu};
}

std::array<Complex, 3> eigenvalues(const Mat3& m) { return eigenvalues(to_complex(m)); }

}  // namespace kelvsim
