#pragma once

#include <string>

#include "kelvsim/errors.hpp"
#include "kelvsim/linalg.hpp"

namespace kelvsim {

// A wavevector k (units 1/length). Must have |k| > 0 wherever it tags a mode.
using WaveVector = Vec3;

// A complex Fourier amplitude v(t) (velocity units).
using ModeAmplitude = CVec3;

// Uniform velocity gradient of the base flow, A_mn = dU_m/dx_n (units 1/time).
// Admissible base flows are trace-free with A.A symmetric (constant-A case).
using GradientMatrix = Mat3;

// Default relative tolerance for construction-time validity checks.
inline constexpr double kConstructionTol = 1e-12;

/// Presets for admissible constant-gradient base flows U = A.x.
struct BaseFlowSpec {
    enum class Kind { Rotation, PlaneStrain, Shear, Elliptic, Custom };

    Kind kind = Kind::Rotation;
    double p0 = 0.0;  // Rotation/PlaneStrain/Shear rate, or elliptic a
    double p1 = 0.0;  // elliptic b
    Mat3 custom{};

    static BaseFlowSpec rotation(double omega) { return {Kind::Rotation, omega, 0.0, {}}; }
    static BaseFlowSpec plane_strain(double s) { return {Kind::PlaneStrain, s, 0.0, {}}; }
    static BaseFlowSpec shear(double s) { return {Kind::Shear, s, 0.0, {}}; }
    static BaseFlowSpec elliptic(double a, double b) { return {Kind::Elliptic, a, b, {}}; }
    static BaseFlowSpec custom_matrix(const Mat3& m) { return {Kind::Custom, 0.0, 0.0, m}; }
};

/// Gradient matrix of a preset.
///   Rotation(w):    [[0,-w,0],[w,0,0],[0,0,0]]
///   PlaneStrain(s): diag(s,-s,0)
///   Shear(s):       A12 = s, rest 0
///   Elliptic(a,b):  [[0,-a,0],[b,0,0],[0,0,0]]
/// Custom matrices are validated: |tr A| <= tol * ||A||_F is required for
/// incompressibility of the base field. Throws ValidationError otherwise.
Mat3 base_flow_matrix(const BaseFlowSpec& spec, double tol = kConstructionTol);

/// Admissibility diagnostics for a constant gradient: U = A.x solves the
/// unforced equations iff tr(A) = 0 and A.A is symmetric. Pure report,
/// acceptance is the caller's call.
struct FlowDiagnostics {
    double trace_defect;     // |tr A|
    double symmetry_defect;  // ||A.A - (A.A)^T||_F
};
FlowDiagnostics validate_base_flow(const Mat3& A);

/// Projection of w onto the plane orthogonal to k:  w - k (k.w)/|k|^2.
/// The result satisfies k . out = 0 to machine precision.
/// Throws ValidationError for |k| = 0 (projector undefined).
ModeAmplitude incompressible_projection(const WaveVector& k, const Vec3& w);
ModeAmplitude incompressible_projection(const WaveVector& k, const CVec3& w);

/// Parse "rotation:1", "strain:0.5", "shear:2", "elliptic:1.5,1",
/// "custom:a11,a12,...,a33" (row-major). Throws ValidationError.
BaseFlowSpec parse_base_flow(const std::string& text);
std::string base_flow_to_string(const BaseFlowSpec& spec);

}  // namespace kelvsim
