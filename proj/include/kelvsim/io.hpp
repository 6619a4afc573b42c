#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "kelvsim/ds_quasilinear.hpp"
#include "kelvsim/floquet_analysis.hpp"
#include "kelvsim/spectral_audit.hpp"

namespace kelvsim {

using json = nlohmann::json;

/// Shortest round-trip decimal form of x (std::to_chars); locale-independent
/// and byte-stable across runs.
std::string format_double(double x);

/// Mode trajectory CSV. Column contract (stable):
///   t,k1,k2,k3,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,energy,defect,p_re,p_im
void write_mode_trajectory_csv(const std::filesystem::path& path, const ModeTrajectory& traj);

/// Ensemble gradient/monitor CSV. Columns:
///   t,a11,a12,a13,a21,a22,a23,a31,a32,a33,trace,total_energy,max_defect,admissibility_defect
void write_gradient_csv(const std::filesystem::path& path, const EnsembleTrajectory& traj);

/// Per-mode trajectory CSV for ensembles (same layout as the mode CSV but
/// without the pressure columns, which are closure-dependent):
///   t,k1,k2,k3,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,energy,defect
void write_ensemble_mode_csv(const std::filesystem::path& path, const EnsembleTrajectory& traj,
                             size_t mode_index);

/// Orientation scan CSV: theta,phi,growth_rate (missing entries print "nan").
void write_scan_csv(const std::filesystem::path& path, const OrientationScan& scan);

json scan_summary_json(const OrientationScan& scan, const std::string& base_flow);
json monodromy_json(const MonodromyResult& result);
json convolution_report_json(const ConvolutionReport& report);
json residual_report_json(const ResidualReport& report);
json cross_scale_report_json(const CrossScaleReport& report);

/// Ensemble initial conditions document:
///   { "point_symmetric": bool,
///     "modes": [ {"k": [kx,ky,kz], "v_im": [a,b,c], "v_re": [a,b,c]? }, ... ] }
/// "v_re" defaults to zero (point-symmetric amplitudes are pure imaginary).
ModeEnsemble read_ensemble_json(const std::filesystem::path& path,
                                double tol = kConstructionTol);
ModeEnsemble parse_ensemble_json(const json& doc, double tol = kConstructionTol);
json ensemble_to_json(const ModeEnsemble& ensemble);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace kelvsim
