#pragma once

#include <optional>
#include <vector>

#include "kelvsim/kelvin_dynamics.hpp"

namespace kelvsim {

/// A finite set of Fourier modes stored as a half-set: one representative per
/// +-k pair. The implicit partner of (k, v) is (-k, -v) when the ensemble is
/// point-symmetric (all amplitudes pure imaginary) and (-k, conj(v)) otherwise
/// (reality of the velocity field).
struct ModeEnsemble {
    std::vector<KelvinMode> modes;
    bool point_symmetric = true;
};

/// Validated constructor. Enforces, per mode: |k| > 0, incompressibility
/// defect <= 1e-10, pure-imaginary amplitudes when point_symmetric (real part
/// <= tol |v|); across modes: no two stored wavevectors equal or opposite.
ModeEnsemble make_ensemble(std::vector<KelvinMode> modes, bool point_symmetric,
                           double tol = kConstructionTol);

/// Selects the gradient that distorts each mode.
struct ClosureSpec {
    enum class Kind { External, DSFullSum, BallRestricted };

    Kind kind = Kind::DSFullSum;
    GradientMatrix external{};  // External only
    double rho = 0.1;           // BallRestricted cutoff, in (0,1)

    static ClosureSpec external_flow(const GradientMatrix& A) {
        return {Kind::External, A, 0.1};
    }
    static ClosureSpec ds_full_sum() { return {Kind::DSFullSum, {}, 0.1}; }
    static ClosureSpec ball_restricted(double rho);
};

/// The superposed mode gradient at the origin, in the A_mn = dU_m/dx_n
/// convention: A_mn = sum over the full +-pair set of i k_n v_m(k). For a
/// point-symmetric half-set this is 2 sum_half i k_n v_m and is real; the
/// conjugate-partner (real field) case is real term by term.
///
/// DSFullSum sums every stored pair. BallRestricted(rho) keeps only modes with
/// |k| <= rho |k_target| and requires a target (ValidationError otherwise).
/// External ignores the ensemble. Throws ConsistencyError when the accumulated
/// sum has an imaginary part above 1e-12 of the term-magnitude scale (point
/// symmetry broken beyond tolerance).
GradientMatrix self_consistent_gradient(const ModeEnsemble& ensemble, const ClosureSpec& closure,
                                        const std::optional<WaveVector>& target = std::nullopt);

/// Convention maps to the gradient/amplitude variables used in the original
/// quasi-linear model: A -> -A^T (an involution) and v -> -i v (order 4).
GradientMatrix convention_map_gradient(const GradientMatrix& A);
ModeAmplitude convention_map_amplitude(const ModeAmplitude& v);

/// Per-mode derivatives under the closure: the gradient is evaluated from the
/// current ensemble (once for External/DSFullSum, per target mode for
/// BallRestricted) and fed to kelvin_rhs for every stored mode.
std::vector<ModeDeriv> ds_rhs(const ModeEnsemble& ensemble, double nu, const ClosureSpec& closure);

/// Trajectory of the whole ensemble plus the gradient history and monitors.
/// gradient[i] is the distorting gradient at sample i (the full superposed sum
/// for DSFullSum/BallRestricted, the external matrix for External).
/// admissibility_defect is || S - S^T ||_F with S = dA/dt + A.A, dA/dt taken
/// by finite differences of the sampled gradient (diagnostic only).
struct EnsembleTrajectory {
    std::vector<double> t;
    std::vector<std::vector<Vec3>> k;    // [mode][sample]
    std::vector<std::vector<CVec3>> v;   // [mode][sample]
    std::vector<GradientMatrix> gradient;
    std::vector<double> total_energy;    // sum over pairs of |v|^2
    std::vector<double> max_defect;      // max per-mode |k.v|/(|k||v|)
    std::vector<double> trace_gradient;
    std::vector<double> admissibility_defect;

    size_t n_samples() const { return t.size(); }
    size_t n_modes() const { return k.size(); }
};

/// RK4 evolution of the coupled ensemble; the closure gradient is recomputed
/// at every integrator stage. Deterministic (ordered sums, fixed mode order).
EnsembleTrajectory evolve_ensemble(const ModeEnsemble& ensemble, double nu,
                                   const ClosureSpec& closure, const SimulationConfig& cfg);

/// Quantifies the cross-scale inconsistency of the full-sum closure: a high-k
/// pair uniformly distorts a low-k mode it should not affect. Runs the
/// {low, high} ensemble and the {low} ensemble under DSFullSum and under
/// BallRestricted(0.1) and reports the relative L2 deviation of the low mode's
/// (k, v) trajectory caused by the high mode.
struct CrossScaleReport {
    double trajectory_deviation = 0.0;   // DSFullSum, relative L2 over samples
    double ball_deviation = 0.0;         // BallRestricted(0.1); exactly 0 when
                                         // no mode lies below the low-mode cutoff
    std::vector<double> gradient_contribution;  // per stored mode, ||pair contribution||_F at t=0
    double scale_ratio = 0.0;            // |k_high| / |k_low|
};

/// Precondition: |k_high| >= 5 |k_low| (ValidationError otherwise). The high
/// mode's amplitude is scaled by amplitude_ratio before the runs.
CrossScaleReport cross_scale_experiment(const KelvinMode& low, const KelvinMode& high,
                                        double amplitude_ratio, double nu,
                                        const SimulationConfig& cfg);

}  // namespace kelvsim
