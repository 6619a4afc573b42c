#include "kelvsim/spectral_audit.hpp"

#include <cmath>

namespace kelvsim {

namespace {

ModeAmplitude partner_amplitude(const ModeEnsemble& e, const KelvinMode& m) {
    return e.point_symmetric ? -m.v : conj(m.v);
}

}  // namespace

CVec3 convolution_at_zero(const ModeEnsemble& ensemble) {
    CVec3 acc{};
    for (const KelvinMode& m : ensemble.modes) {
        const ModeAmplitude vp = partner_amplitude(ensemble, m);
        // stored mode kappa = k:   [k . u(-k)] u(k)
        const Complex s1 = dot(m.k, vp);
        // partner mode kappa = -k: [-k . u(k)] u(-k)
        const Complex s2 = -dot(m.k, m.v);
        for (int i = 0; i < 3; ++i) acc[i] += s1 * m.v[i] + s2 * vp[i];
    }
    return acc;
}

double convolution_scale(const ModeEnsemble& ensemble) {
    double s = 0.0;
    for (const KelvinMode& m : ensemble.modes) s += 2.0 * norm(m.k) * norm2(m.v);
    return s;
}

Vec3 audit_test_field(const Vec3& q, const Vec3& w, double sigma) {
    const double q2 = norm2(q);
    const double wn = norm(w);
    if (q2 == 0.0 || wn == 0.0) return {0.0, 0.0, 0.0};
    const Vec3 proj = w - (dot(q, w) / q2) * q;
    const double odd = dot(q, w) / (wn * sigma);
    const double env = std::exp(-0.5 * q2 / (sigma * sigma));
    return (odd * env) * proj;
}

namespace {

// Nodes/weights of n-point Gauss-Legendre on [-1,1] (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

struct BallIntegrals {
    Vec3 exact{};
    Mat3 moment{};  // moment(n,m) = int k'_n u_m(k') dk'
};

// Both integrals over the indicator-restricted ball in one sweep. The
// indicator |node| <= radius is decided on the canonical (unrotated) node.
BallIntegrals ball_quadrature(int n, double radius, const Vec3& k_target, const Vec3& w,
                              double sigma, const Mat3& rot) {
    std::vector<double> x, wt;
    gauss_legendre(n, x, wt);

    BallIntegrals out;
    const double r3 = radius * radius * radius;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const Vec3 node = {x[i], x[j], x[l]};
                if (norm2(node) > 1.0) continue;  // outside the unit ball
                const double weight = wt[i] * wt[j] * wt[l] * r3;
                const Vec3 kp = matvec(rot, radius * node);
                const Vec3 u_kp = audit_test_field(kp, w, sigma);
                const Vec3 u_shift = audit_test_field(k_target - kp, w, sigma);
                const double contraction = dot(kp, u_shift);
                for (int c = 0; c < 3; ++c) out.exact[c] += weight * contraction * u_kp[c];
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) out.moment(a, b) += weight * kp[a] * u_kp[b];
            }
    return out;
}

}  // namespace

ConvolutionReport nonlocal_approx_error(const WaveVector& k_target, double envelope_width,
                                        double ball_radius, int quadrature_n,
                                        const Vec3& field_vector, const Mat3& grid_rotation) {
    if (!(ball_radius > 0.0) || !(ball_radius < norm(k_target)))
        throw ValidationError("nonlocal_approx_error: need 0 < ball_radius < |k_target|");
    if (quadrature_n < 8)
        throw ValidationError("nonlocal_approx_error: quadrature_n must be >= 8 per axis");
    if (!(envelope_width > 0.0))
        throw ValidationError("nonlocal_approx_error: envelope width must be > 0");

    const auto fine = ball_quadrature(2 * quadrature_n, ball_radius, k_target, field_vector,
                                      envelope_width, grid_rotation);
    const auto coarse = ball_quadrature(quadrature_n, ball_radius, k_target, field_vector,
                                        envelope_width, grid_rotation);

    const Vec3 u_k = audit_test_field(k_target, field_vector, envelope_width);
    Vec3 approx{};
    for (int m = 0; m < 3; ++m) {
        double s = 0.0;
        for (int n = 0; n < 3; ++n) s += u_k[n] * fine.moment(n, m);
        approx[m] = s;
    }

    ConvolutionReport rep;
    rep.exact_term = to_complex(fine.exact);
    rep.approx_term = to_complex(approx);
    rep.separation_ratio = ball_radius / norm(k_target);
    const double scale = std::max(norm(fine.exact), norm(approx));
    rep.relative_error = scale > 0.0 ? norm(fine.exact - approx) / scale : 0.0;
    rep.quadrature_error_estimate = norm(fine.exact - coarse.exact);
    rep.quadrature_warning =
        norm(fine.exact) > 0.0 && rep.quadrature_error_estimate > 0.1 * norm(fine.exact);
    return rep;
}

namespace {

CVec3 final_amplitude(const Vec3& k_init, const Vec3& w, const GradientMatrix& A, double t_end,
                      const SimulationConfig& cfg) {
    SimulationConfig c = cfg;
    c.t_end = t_end;
    const KelvinMode mode{k_init, incompressible_projection(k_init, w)};
    const ModeTrajectory traj = integrate_mode(mode, A, c);
    return traj.v.back();
}

}  // namespace

ResidualReport pde_residual_check(const GradientMatrix& A, const WaveVector& k0, double delta,
                                  double t, double nu, const SimulationConfig& cfg,
                                  const Vec3& field_vector) {
    const double k0n = norm(k0);
    if (!(delta > 0.0) || delta > 0.2 * k0n)
        throw ValidationError("pde_residual_check: need 0 < delta <= 0.2 |k0|");
    if (!(t > 0.0)) throw ValidationError("pde_residual_check: t must be > 0");

    // Exact linear wavevector map over [0, t]: k(t) = expm(-A^T t) k(0).
    const Mat3 kmap = expm(-t * transpose(A));
    if (std::abs(det(kmap)) < 1e-6)
        throw IntegrationError("pde_residual_check: stencil map degenerate", t);
    const Vec3 k_center = matvec(kmap, k0);

    // Directional derivatives along the mapped stencil legs.
    CVec3 diff[3];
    for (int n = 0; n < 3; ++n) {
        Vec3 e{};
        e[n] = delta;
        const CVec3 v_plus = final_amplitude(k0 + e, field_vector, A, t, cfg);
        const CVec3 v_minus = final_amplitude(k0 - e, field_vector, A, t, cfg);
        diff[n] = (1.0 / (2.0 * delta)) * (v_plus - v_minus);
    }
    // Solve sum_j (kmap e_n)_j grad_j = diff_n per amplitude component.
    Mat3 stencil;  // rows are the mapped legs
    for (int n = 0; n < 3; ++n)
        for (int j = 0; j < 3; ++j) stencil(n, j) = kmap(j, n);
    CVec3 grad[3];  // grad[l][j] = dv_l / dk_j
    for (int l = 0; l < 3; ++l) {
        const std::array<Complex, 3> rhs = {diff[0][l], diff[1][l], diff[2][l]};
        const auto g = solve3<Complex>(stencil, rhs);
        grad[l] = {g[0], g[1], g[2]};
    }

    // d v / d t at fixed k: two characteristics that arrive at k_center at
    // t -+ h. The offset h is tied to delta so both error terms shrink as
    // O(delta^2) together.
    const double rate = std::max(frobenius_norm(A), nu * k0n * k0n);
    const double h = rate > 0.0 ? delta / (k0n * rate) : delta / k0n;
    if (!(h < t))
        throw ValidationError("pde_residual_check: time offset h >= t; decrease delta");
    const Mat3 back_plus = expm(h * transpose(A));
    const Mat3 back_minus = expm(-h * transpose(A));
    const CVec3 v_later = final_amplitude(matvec(back_plus, k0), field_vector, A, t + h, cfg);
    const CVec3 v_earlier = final_amplitude(matvec(back_minus, k0), field_vector, A, t - h, cfg);
    const CVec3 dv_dt = (1.0 / (2.0 * h)) * (v_later - v_earlier);

    const CVec3 v_center = final_amplitude(k0, field_vector, A, t, cfg);

    // Assemble the residual of the Fourier-space equation.
    const Vec3 kA = vecmat(k_center, A);
    CVec3 advection{};
    for (int l = 0; l < 3; ++l) advection[l] = dot(kA, grad[l]);
    const ModeDeriv d = kelvin_rhs(k_center, v_center, A, nu);

    CVec3 residual{};
    for (int l = 0; l < 3; ++l) residual[l] = dv_dt[l] - advection[l] - d.dv[l];

    ResidualReport rep;
    rep.stencil_delta = delta;
    rep.time = t;
    rep.residual_norm = norm(residual);
    rep.reference_norm = norm(dv_dt) + norm(advection) + norm(d.dv);
    return rep;
}

}  // namespace kelvsim
