#pragma once

#include <optional>
#include <vector>

#include "kelvsim/flowcore.hpp"
#include "kelvsim/linalg.hpp"

namespace kelvsim {

/// Fundamental solution of the amplitude equation over one wavevector period,
/// with Floquet multipliers and the resulting parametric growth rate.
struct MonodromyResult {
    double period = 0.0;
    CMat3 monodromy{};
    std::array<Complex, 3> multipliers{};
    double growth_rate = 0.0;  // max over multipliers of ln|lambda| / T
};

/// Period of k(t) on a closed-streamline base flow, from the spectrum of
/// -A^T: a purely imaginary pair +-i w gives T = 2 pi / w provided k0 has a
/// nonzero component in the oscillatory eigenplane. Aperiodic flows (real or
/// damped spectra) and k0 along the neutral axis return nullopt.
std::optional<double> wavevector_period(const GradientMatrix& A, const WaveVector& k0);

/// Integrate the 3x3 fundamental matrix of the amplitude equation along k(t)
/// over [0, T] with fixed-step RK4 (steps_per_period >= 32), then take its
/// eigenvalues. Throws ValidationError for aperiodic flows.
MonodromyResult monodromy(const GradientMatrix& A, const WaveVector& k0, double nu,
                          int steps_per_period = 512);

/// Growth rates over a grid of initial wavevector orientations. Grid points
/// are cell-centered in theta (avoids the poles) and uniform in phi:
///   theta_i = pi (i + 1/2) / n_theta,  phi_j = 2 pi j / n_phi.
/// Entries where the monodromy computation fails are recorded as NaN.
struct OrientationScan {
    int n_theta = 0;
    int n_phi = 0;
    double k_mag = 1.0;
    double nu = 0.0;
    std::vector<double> theta;   // size n_theta
    std::vector<double> phi;     // size n_phi
    std::vector<double> growth;  // row-major [i_theta * n_phi + j_phi], NaN = missing
    double max_growth = 0.0;
    int argmax_index = -1;       // flattened index, -1 when all entries missing

    double at(int i_theta, int j_phi) const { return growth[i_theta * n_phi + j_phi]; }
};

/// Evaluate the scan grid (concurrently; assembly order is deterministic).
OrientationScan orientation_scan(const GradientMatrix& A, double nu, int n_theta, int n_phi,
                                 double k_mag, int steps_per_period = 512);

}  // namespace kelvsim
