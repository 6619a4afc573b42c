#include "kelvsim/floquet_analysis.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "kelvsim/integrate.hpp"

namespace kelvsim {

std::optional<double> wavevector_period(const GradientMatrix& A, const WaveVector& k0) {
    const Mat3 M = -transpose(A);  // dk/dt = M k
    const double scale = frobenius_norm(M);
    if (scale == 0.0) return std::nullopt;

    // M is trace-free, so its characteristic polynomial is already depressed:
    // lambda^3 + p lambda + q. A purely imaginary pair forces the third
    // eigenvalue to zero, i.e. q = -det(M) = 0 and p > 0 with w = sqrt(p).
    const Mat3 M2 = matmul(M, M);
    const double p = -0.5 * trace(M2);
    const double q = -det(M);
    if (std::abs(q) > 1e-12 * scale * scale * scale) return std::nullopt;
    if (!(p > 1e-12 * scale * scale)) return std::nullopt;

    const double w2 = p;
    // Split k0 = (plane component) + (kernel component): (M^2 + w^2 I) kills
    // the oscillatory plane and scales the kernel direction by w^2.
    Vec3 null_part = matvec(M2, k0);
    for (int i = 0; i < 3; ++i) null_part[i] = (null_part[i] + w2 * k0[i]) / w2;
    const Vec3 plane_part = k0 - null_part;
    if (norm(plane_part) <= 1e-12 * norm(k0)) return std::nullopt;

    return 2.0 * M_PI / std::sqrt(w2);
}

namespace {

// Joint state for the fundamental-matrix integration: wavevector plus the
// (real) 3x3 fundamental solution of the amplitude equation.
struct KPhiState {
    Vec3 k{};
    Mat3 phi{};
};

void state_set_axpy(KPhiState& out, const KPhiState& y, double a, const KPhiState& d) {
    for (int i = 0; i < 3; ++i) out.k[i] = y.k[i] + a * d.k[i];
    for (int i = 0; i < 9; ++i) out.phi.a[i] = y.phi.a[i] + a * d.phi.a[i];
}
void state_rk4_combine(KPhiState& y, double h, const KPhiState& k1, const KPhiState& k2,
                       const KPhiState& k3, const KPhiState& k4) {
    const double c = h / 6.0;
    for (int i = 0; i < 3; ++i)
        y.k[i] += c * (k1.k[i] + 2.0 * k2.k[i] + 2.0 * k3.k[i] + k4.k[i]);
    for (int i = 0; i < 9; ++i)
        y.phi.a[i] += c * (k1.phi.a[i] + 2.0 * k2.phi.a[i] + 2.0 * k3.phi.a[i] + k4.phi.a[i]);
}
void state_resize_like(KPhiState&, const KPhiState&) {}

// Coefficient matrix of the amplitude equation at wavevector k:
//   L = -nu |k|^2 I - A + (2/|k|^2) k (A^T k)^T
Mat3 amplitude_matrix(const Vec3& k, const Mat3& A, double nu) {
    const double k2 = norm2(k);
    const Vec3 kA = vecmat(k, A);
    Mat3 L = -1.0 * A + (2.0 / k2) * outer(k, kA);
    const double visc = nu * k2;
    for (int i = 0; i < 3; ++i) L(i, i) -= visc;
    return L;
}

}  // namespace

MonodromyResult monodromy(const GradientMatrix& A, const WaveVector& k0, double nu,
                          int steps_per_period) {
    const auto period = wavevector_period(A, k0);
    if (!period)
        throw ValidationError("monodromy: wavevector trajectory is not periodic for this base flow");
    if (steps_per_period < 32) throw ValidationError("monodromy: steps_per_period must be >= 32");

    KPhiState state{k0, Mat3::identity()};
    const auto rhs = [&](const KPhiState& y, double, KPhiState& dy) {
        dy.k = -vecmat(y.k, A);
        dy.phi = matmul(amplitude_matrix(y.k, A, nu), y.phi);
    };

    RkWork<KPhiState> work(state);
    const double h = *period / steps_per_period;
    for (int i = 0; i < steps_per_period; ++i) rk4_step(state, i * h, h, rhs, work);

    MonodromyResult result;
    result.period = *period;
    result.monodromy = to_complex(state.phi);
    result.multipliers = eigenvalues(state.phi);
    double g = -std::numeric_limits<double>::infinity();
    for (const Complex& lam : result.multipliers) g = std::max(g, std::log(std::abs(lam)));
    result.growth_rate = g / *period;
    return result;
}

namespace {

// Static slot-per-index parallelism: results land in preassigned positions,
// so assembly is deterministic regardless of thread scheduling.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int n_threads = static_cast<int>(std::min<unsigned>(hw ? hw : 1, 8));
    if (n_threads <= 1 || n < 4) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int tid = 0; tid < n_threads; ++tid) {
        pool.emplace_back([&, tid] {
            for (int i = tid; i < n; i += n_threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

OrientationScan orientation_scan(const GradientMatrix& A, double nu, int n_theta, int n_phi,
                                 double k_mag, int steps_per_period) {
    if (n_theta < 2 || n_phi < 2)
        throw ValidationError("orientation_scan: grid must be at least 2x2");
    if (!(k_mag > 0.0)) throw ValidationError("orientation_scan: |k0| must be > 0");

    OrientationScan scan;
    scan.n_theta = n_theta;
    scan.n_phi = n_phi;
    scan.k_mag = k_mag;
    scan.nu = nu;
    scan.theta.resize(n_theta);
    scan.phi.resize(n_phi);
    for (int i = 0; i < n_theta; ++i) scan.theta[i] = M_PI * (i + 0.5) / n_theta;
    for (int j = 0; j < n_phi; ++j) scan.phi[j] = 2.0 * M_PI * j / n_phi;
    scan.growth.assign(static_cast<size_t>(n_theta) * n_phi,
                       std::numeric_limits<double>::quiet_NaN());

    parallel_for(n_theta * n_phi, [&](int idx) {
        const int i = idx / n_phi;
        const int j = idx % n_phi;
        const double st = std::sin(scan.theta[i]), ct = std::cos(scan.theta[i]);
        const Vec3 k0 = {k_mag * st * std::cos(scan.phi[j]), k_mag * st * std::sin(scan.phi[j]),
                         k_mag * ct};
        try {
            scan.growth[idx] = monodromy(A, k0, nu, steps_per_period).growth_rate;
        } catch (const ValidationError&) {
            // aperiodic direction: leave as missing
        } catch (const IntegrationError&) {
        }
    });

    scan.max_growth = -std::numeric_limits<double>::infinity();
    scan.argmax_index = -1;
    for (size_t idx = 0; idx < scan.growth.size(); ++idx) {
        const double g = scan.growth[idx];
        if (!std::isnan(g) && g > scan.max_growth) {
            scan.max_growth = g;
            scan.argmax_index = static_cast<int>(idx);
        }
    }
    return scan;
}

}  // namespace kelvsim
