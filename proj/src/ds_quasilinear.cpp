#include "kelvsim/ds_quasilinear.hpp"

#include <cmath>
#include <span>

namespace kelvsim {

ModeEnsemble make_ensemble(std::vector<KelvinMode> modes, bool point_symmetric, double tol) {
    for (size_t i = 0; i < modes.size(); ++i) {
        const KelvinMode& m = modes[i];
        if (norm2(m.k) == 0.0)
            throw ValidationError("ensemble: mode " + std::to_string(i) + " has |k| = 0");
        const double vn = norm(m.v);
        if (vn > 0.0 && std::abs(dot(m.k, m.v)) > 1e-10 * norm(m.k) * vn)
            throw ValidationError("ensemble: mode " + std::to_string(i) +
                                  " violates incompressibility");
        if (point_symmetric && vn > 0.0) {
            const double re = norm(real_part(m.v));
            if (re > tol * vn)
                throw ValidationError("ensemble: mode " + std::to_string(i) +
                                      " is not pure imaginary but point symmetry is requested");
        }
        for (size_t j = 0; j < i; ++j) {
            const double scale = std::max(norm(m.k), norm(modes[j].k));
            if (norm(m.k - modes[j].k) <= tol * scale || norm(m.k + modes[j].k) <= tol * scale)
                throw ValidationError("ensemble: modes " + std::to_string(j) + " and " +
                                      std::to_string(i) +
                                      " have equal or opposite wavevectors (store one per pair)");
        }
    }
    return {std::move(modes), point_symmetric};
}

ClosureSpec ClosureSpec::ball_restricted(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw ValidationError("closure: ball cutoff rho must lie strictly in (0,1)");
    return {Kind::BallRestricted, {}, rho};
}

namespace {

// Pair-summed gradient over the stored modes (fixed order, deterministic).
// Point-symmetric pairs contribute 2 i k_n v_m; conjugate pairs contribute
// i k_n v_m + conj(i k_n v_m), which is real term by term. The imaginary
// residue of the accumulated sum measures broken point symmetry.
GradientMatrix superposed_gradient(std::span<const ModeState> modes, bool point_symmetric,
                                   double cutoff /* include |k| <= cutoff; <0: all */) {
    CMat3 acc{};
    double term_scale = 0.0;
    for (const ModeState& mode : modes) {
        if (cutoff >= 0.0 && !(norm(mode.k) <= cutoff)) continue;
        term_scale += 2.0 * norm(mode.k) * norm(mode.v);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                const Complex z = Complex(0.0, 1.0) * mode.k[n] * mode.v[m];
                acc(m, n) += point_symmetric ? 2.0 * z : z + std::conj(z);
            }
    }

    GradientMatrix A{};
    double imag_defect = 0.0;
    for (int i = 0; i < 9; ++i) {
        A.a[i] = acc.a[i].real();
        imag_defect = std::max(imag_defect, std::abs(acc.a[i].imag()));
    }
    if (imag_defect > 1e-12 * std::max(term_scale, 1e-300))
        throw ConsistencyError(
            "superposed gradient has a nonzero imaginary part (point symmetry broken): " +
            std::to_string(imag_defect));
    return A;
}

std::vector<ModeState> to_states(const ModeEnsemble& e) {
    std::vector<ModeState> s(e.modes.size());
    for (size_t i = 0; i < e.modes.size(); ++i) s[i] = {e.modes[i].k, e.modes[i].v};
    return s;
}

}  // namespace

GradientMatrix self_consistent_gradient(const ModeEnsemble& ensemble, const ClosureSpec& closure,
                                        const std::optional<WaveVector>& target) {
    switch (closure.kind) {
        case ClosureSpec::Kind::External:
            return closure.external;
        case ClosureSpec::Kind::DSFullSum: {
            const auto states = to_states(ensemble);
            return superposed_gradient(states, ensemble.point_symmetric, -1.0);
        }
        case ClosureSpec::Kind::BallRestricted: {
            if (!target)
                throw ValidationError("ball-restricted closure needs a target wavevector");
            const auto states = to_states(ensemble);
            return superposed_gradient(states, ensemble.point_symmetric,
                                       closure.rho * norm(*target));
        }
    }
    return {};
}

GradientMatrix convention_map_gradient(const GradientMatrix& A) { return -transpose(A); }

ModeAmplitude convention_map_amplitude(const ModeAmplitude& v) {
    return Complex(0.0, -1.0) * v;
}

namespace {

// Stage-level derivative evaluation shared by ds_rhs and the integrator.
// With a stage time supplied, per-mode domain failures are annotated with the
// time stamp and mode index; without one they propagate untouched.
void ds_derivs(std::span<const ModeState> modes, bool point_symmetric, double nu,
               const ClosureSpec& closure, std::span<ModeState> out,
               const double* stage_time = nullptr) {
    const auto mode_rhs = [&](size_t i, const GradientMatrix& A) {
        try {
            const ModeDeriv d = kelvin_rhs(modes[i].k, modes[i].v, A, nu);
            out[i] = {d.dk, d.dv};
        } catch (const ValidationError& e) {
            if (!stage_time) throw;
            throw IntegrationError(std::string(e.what()) + " (mode " + std::to_string(i) + ")",
                                   *stage_time, static_cast<int>(i));
        }
    };
    if (closure.kind == ClosureSpec::Kind::BallRestricted) {
        for (size_t i = 0; i < modes.size(); ++i) {
            const GradientMatrix A = superposed_gradient(modes, point_symmetric,
                                                         closure.rho * norm(modes[i].k));
            mode_rhs(i, A);
        }
        return;
    }
    const GradientMatrix A = closure.kind == ClosureSpec::Kind::External
                                 ? closure.external
                                 : superposed_gradient(modes, point_symmetric, -1.0);
    for (size_t i = 0; i < modes.size(); ++i) mode_rhs(i, A);
}

}  // namespace

std::vector<ModeDeriv> ds_rhs(const ModeEnsemble& ensemble, double nu,
                              const ClosureSpec& closure) {
    auto states = to_states(ensemble);
    std::vector<ModeState> d(states.size());
    ds_derivs(states, ensemble.point_symmetric, nu, closure, d);
    std::vector<ModeDeriv> out(d.size());
    for (size_t i = 0; i < d.size(); ++i) out[i] = {d[i].k, d[i].v};
    return out;
}

EnsembleTrajectory evolve_ensemble(const ModeEnsemble& ensemble, double nu,
                                   const ClosureSpec& closure, const SimulationConfig& cfg) {
    validate_config(cfg);
    EnsembleState state = to_states(ensemble);
    const size_t n_modes = state.size();
    const bool ps = ensemble.point_symmetric;

    EnsembleTrajectory traj;
    traj.k.resize(n_modes);
    traj.v.resize(n_modes);

    const auto rhs = [&](const EnsembleState& y, double t, EnsembleState& dy) {
        ds_derivs(y, ps, nu, closure, dy, &t);
    };
    const auto recorder = [&](long step, double t, const EnsembleState& y) {
        if (step % cfg.output_every != 0 && t != cfg.t_end) return;
        traj.t.push_back(t);
        const GradientMatrix A = closure.kind == ClosureSpec::Kind::External
                                     ? closure.external
                                     : superposed_gradient(y, ps, -1.0);
        traj.gradient.push_back(A);
        traj.trace_gradient.push_back(trace(A));
        double energy = 0.0, max_defect = 0.0;
        for (size_t m = 0; m < n_modes; ++m) {
            traj.k[m].push_back(y[m].k);
            traj.v[m].push_back(y[m].v);
            energy += norm2(y[m].v);  // |v|^2/2 for the mode and its partner
            max_defect = std::max(max_defect, incompressibility_defect({y[m].k, y[m].v}));
        }
        traj.total_energy.push_back(energy);
        traj.max_defect.push_back(max_defect);
    };
    const auto post = [&](double, EnsembleState& y) {
        if (!cfg.reproject) return;
        for (ModeState& m : y) m.v = incompressible_projection(m.k, m.v);
    };

    if (cfg.method == IntegratorMethod::Rk4)
        integrate_rk4(state, 0.0, cfg.t_end, cfg.dt, rhs, recorder, post);
    else
        integrate_dopri45(state, 0.0, cfg.t_end, cfg.dt, cfg.abs_tol, cfg.rel_tol, rhs, recorder,
                          post);

    // dA/dt + A.A symmetry monitor, dA/dt by finite differences of samples.
    const size_t n = traj.t.size();
    traj.admissibility_defect.resize(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (n < 2) break;
        const size_t lo = i == 0 ? 0 : i - 1;
        const size_t hi = i + 1 == n ? i : i + 1;
        const double dt_fd = traj.t[hi] - traj.t[lo];
        if (dt_fd <= 0.0) continue;
        const Mat3 dA = (1.0 / dt_fd) * (traj.gradient[hi] - traj.gradient[lo]);
        const Mat3 S = dA + matmul(traj.gradient[i], traj.gradient[i]);
        traj.admissibility_defect[i] = frobenius_norm(S - transpose(S));
    }
    return traj;
}

namespace {

// Relative L2 deviation of mode `idx` between two runs on identical sample grids.
double mode_trajectory_deviation(const EnsembleTrajectory& a, const EnsembleTrajectory& b,
                                 size_t idx) {
    const size_t n = std::min(a.n_samples(), b.n_samples());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += norm2(a.k[idx][i] - b.k[idx][i]) + norm2(a.v[idx][i] - b.v[idx][i]);
        den += norm2(b.k[idx][i]) + norm2(b.v[idx][i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

CrossScaleReport cross_scale_experiment(const KelvinMode& low, const KelvinMode& high,
                                        double amplitude_ratio, double nu,
                                        const SimulationConfig& cfg) {
    if (norm(high.k) < 5.0 * norm(low.k))
        throw ValidationError("cross-scale experiment needs |k_high| >= 5 |k_low|");

    const KelvinMode high_scaled{high.k, amplitude_ratio * high.v};
    const ModeEnsemble both = make_ensemble({low, high_scaled}, true);
    const ModeEnsemble low_only = make_ensemble({low}, true);

    const ClosureSpec full = ClosureSpec::ds_full_sum();
    const ClosureSpec ball = ClosureSpec::ball_restricted(0.1);

    const auto full_both = evolve_ensemble(both, nu, full, cfg);
    const auto full_low = evolve_ensemble(low_only, nu, full, cfg);
    const auto ball_both = evolve_ensemble(both, nu, ball, cfg);
    const auto ball_low = evolve_ensemble(low_only, nu, ball, cfg);

    CrossScaleReport report;
    report.trajectory_deviation = mode_trajectory_deviation(full_both, full_low, 0);
    report.ball_deviation = mode_trajectory_deviation(ball_both, ball_low, 0);
    report.scale_ratio = norm(high.k) / norm(low.k);
    for (const KelvinMode& m : both.modes) {
        const ModeEnsemble single = make_ensemble({m}, true);
        report.gradient_contribution.push_back(
            frobenius_norm(self_consistent_gradient(single, full)));
    }
    return report;
}

}  // namespace kelvsim
