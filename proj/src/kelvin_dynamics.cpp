#include "kelvsim/kelvin_dynamics.hpp"

namespace kelvsim {

KelvinMode make_kelvin_mode(const WaveVector& k, const ModeAmplitude& v, double tol) {
    if (norm2(k) == 0.0) throw ValidationError("kelvin mode: |k| = 0");
    const double vn = norm(v);
    if (vn > 0.0) {
        const double defect = std::abs(dot(k, v));
        if (defect > tol * norm(k) * vn)
            throw ValidationError("kelvin mode: incompressibility defect |k.v| = " +
                                  std::to_string(defect) + " exceeds tolerance");
    }
    return {k, v};
}

void validate_config(const SimulationConfig& cfg) {
    if (!(cfg.nu >= 0.0)) throw ValidationError("config: nu must be >= 0");
    if (!(cfg.dt > 0.0)) throw ValidationError("config: dt must be > 0");
    if (!(cfg.t_end > 0.0)) throw ValidationError("config: t_end must be > 0");
    if (cfg.dt > cfg.t_end) throw ValidationError("config: dt must not exceed t_end");
    if (cfg.method == IntegratorMethod::Rk45Adaptive &&
        (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)))
        throw ValidationError("config: adaptive tolerances must be positive");
    if (cfg.output_every < 1) throw ValidationError("config: output_every must be >= 1");
}

ModeDeriv kelvin_rhs(const WaveVector& k, const ModeAmplitude& v, const GradientMatrix& A,
                     double nu) {
    const double k2 = norm2(k);
    if (k2 == 0.0) throw ValidationError("kelvin_rhs: |k| = 0 (pressure projector singular)");

    ModeDeriv d;
    const Vec3 kA = vecmat(k, A);  // (kA)_n = k_m A_mn
    d.dk = -kA;

    const Complex kAv = dot(kA, v);
    const CVec3 Av = matvec(A, v);
    const Complex proj = 2.0 * kAv / k2;
    for (int i = 0; i < 3; ++i) d.dv[i] = -nu * k2 * v[i] - Av[i] + k[i] * proj;
    return d;
}

Complex pressure_amplitude(const WaveVector& k, const ModeAmplitude& v, const GradientMatrix& A) {
    const double k2 = norm2(k);
    if (k2 == 0.0) throw ValidationError("pressure_amplitude: |k| = 0");
    return Complex(0.0, 2.0) * dot(vecmat(k, A), v) / k2;
}

double mode_energy(const KelvinMode& mode) { return 0.5 * norm2(mode.v); }

double incompressibility_defect(const KelvinMode& mode) {
    const double vn = norm(mode.v);
    if (vn == 0.0) return 0.0;
    return std::abs(dot(mode.k, mode.v)) / (norm(mode.k) * vn);
}

namespace {

void record_sample(ModeTrajectory& traj, double t, const ModeState& s, const GradientMatrix& A) {
    traj.t.push_back(t);
    traj.k.push_back(s.k);
    traj.v.push_back(s.v);
    traj.energy.push_back(0.5 * norm2(s.v));
    traj.defect.push_back(incompressibility_defect({s.k, s.v}));
    traj.k_norm.push_back(norm(s.k));
    traj.pressure.push_back(pressure_amplitude(s.k, s.v, A));
}

}  // namespace

ModeTrajectory integrate_mode(const KelvinMode& mode, const GradientMatrix& A,
                              const SimulationConfig& cfg) {
    validate_config(cfg);
    if (norm2(mode.k) == 0.0) throw ValidationError("integrate_mode: |k| = 0");

    ModeState state{mode.k, mode.v};
    ModeTrajectory traj;

    const auto rhs = [&](const ModeState& y, double, ModeState& dy) {
        const ModeDeriv d = kelvin_rhs(y.k, y.v, A, cfg.nu);
        dy.k = d.dk;
        dy.v = d.dv;
    };
    const auto recorder = [&](long step, double t, const ModeState& y) {
        if (step % cfg.output_every == 0 || t == cfg.t_end) record_sample(traj, t, y, A);
    };
    const auto post = [&](double, ModeState& y) {
        if (cfg.reproject) y.v = incompressible_projection(y.k, y.v);
    };

    if (cfg.method == IntegratorMethod::Rk4)
        integrate_rk4(state, 0.0, cfg.t_end, cfg.dt, rhs, recorder, post);
    else
        integrate_dopri45(state, 0.0, cfg.t_end, cfg.dt, cfg.abs_tol, cfg.rel_tol, rhs, recorder,
                          post);
    return traj;
}

}  // namespace kelvsim
