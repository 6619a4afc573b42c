#pragma once

#include <vector>

#include "kelvsim/flowcore.hpp"
#include "kelvsim/integrate.hpp"
#include "kelvsim/linalg.hpp"

namespace kelvsim {

/// One Kelvin mode v(x,t) = v(t) exp(i k(t).x) riding on a uniform-gradient
/// base flow. Valid modes have |k| > 0 and k.v = 0 (within tolerance).
struct KelvinMode {
    WaveVector k{};
    ModeAmplitude v{};
};

/// Validated constructor: throws ValidationError when |k| = 0 or the
/// incompressibility defect |k.v| exceeds tol |k||v|. |v| = 0 is legal.
KelvinMode make_kelvin_mode(const WaveVector& k, const ModeAmplitude& v,
                            double tol = kConstructionTol);

enum class IntegratorMethod { Rk4, Rk45Adaptive };

struct SimulationConfig {
    double nu = 0.0;    // kinematic viscosity, >= 0
    double dt = 1e-3;   // fixed step (RK4) or initial step (adaptive)
    double t_end = 1.0;
    IntegratorMethod method = IntegratorMethod::Rk4;
    double abs_tol = 1e-10;  // adaptive only
    double rel_tol = 1e-10;  // adaptive only
    int output_every = 1;    // record every n-th accepted step
    bool reproject = false;  // re-impose k.v = 0 after each step (off: drift is a diagnostic)
};

/// Throws ValidationError on nonsense (dt <= 0, dt > t_end, nu < 0, ...).
void validate_config(const SimulationConfig& cfg);

struct ModeDeriv {
    Vec3 dk{};
    CVec3 dv{};
};

/// Right-hand side of the Kelvin-mode system:
///   dk_n/dt = -k_m A_mn
///   dv/dt   = -nu |k|^2 v - A.v + 2 k (k.A.v)/|k|^2,   k.A.v = k_m A_mn v_n
/// The pressure has been eliminated through the last (projector) term.
/// Throws ValidationError when |k| = 0.
ModeDeriv kelvin_rhs(const WaveVector& k, const ModeAmplitude& v, const GradientMatrix& A,
                     double nu);

/// Pressure amplitude recovered from the mode: p = 2 i (k.A.v)/|k|^2.
/// Diagnostic only; the integrator never uses it.
Complex pressure_amplitude(const WaveVector& k, const ModeAmplitude& v, const GradientMatrix& A);

/// Kinetic energy |v|^2 / 2 of a mode.
double mode_energy(const KelvinMode& mode);

/// Normalized incompressibility defect |k.v| / (|k||v|); 0 when |v| = 0.
double incompressibility_defect(const KelvinMode& mode);

/// Sampled trajectory of one mode with constraint/energy monitors.
struct ModeTrajectory {
    std::vector<double> t;
    std::vector<Vec3> k;
    std::vector<CVec3> v;
    std::vector<double> energy;    // |v|^2 / 2
    std::vector<double> defect;    // |k.v|/(|k||v|)
    std::vector<double> k_norm;    // |k|
    std::vector<Complex> pressure; // 2i (k.A.v)/|k|^2

    size_t size() const { return t.size(); }
};

/// Integrate one mode on a constant-gradient base flow. Deterministic for a
/// fixed config: same inputs give bit-identical trajectories.
ModeTrajectory integrate_mode(const KelvinMode& mode, const GradientMatrix& A,
                              const SimulationConfig& cfg);

}  // namespace kelvsim
