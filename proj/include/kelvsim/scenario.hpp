#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "kelvsim/linalg.hpp"

namespace kelvsim {

// Exit codes shared by the CLI and the scenario runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;
inline constexpr int kExitVerifyFailure = 4;

/// Flat description of one run. Every field that affects numerics is
/// serialized into the run manifest, so a run can be replayed from it.
struct ScenarioConfig {
    std::string scenario = "mode";  // mode|floquet|ds|audit|verify

    // base flow and mode initial conditions
    std::string base = "rotation:1";
    Vec3 k0{1.0, 0.0, 0.0};
    Vec3 v0_im{0.0, 0.0, 1.0};
    Vec3 v0_re{0.0, 0.0, 0.0};

    // integration
    double nu = 0.0;
    double dt = 1e-3;
    double t_end = 1.0;
    std::string method = "rk4";  // rk4|rk45
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int output_every = 1;
    bool reproject = false;

    // floquet
    int n_theta = 0;  // 0,0 = single monodromy; otherwise scan grid
    int n_phi = 0;
    double k_mag = 1.0;
    int steps_per_period = 512;

    // ds
    std::string ensemble_path;
    std::string closure = "full";  // full | ball:RHO | external:<base-flow>
    bool cross_scale = false;
    Vec3 k_low{1.0, 0.0, 0.0};
    Vec3 k_high{0.0, 10.0, 0.0};
    Vec3 v_low_im{0.0, 1.0, 0.0};
    Vec3 v_high_im{1.0, 0.0, 0.0};
    double amplitude_ratio = 1.0;

    // audit
    std::string check = "zero-mode";  // zero-mode|nonlocal|pde-residual
    int random_pairs = 100;
    std::vector<double> ratios{0.5, 0.2, 0.05, 0.01};
    double envelope_width = 1.0;
    int quadrature_n = 20;
    std::vector<double> deltas{1e-2, 5e-3, 2.5e-3};
    double residual_time = 1.0;

    // verify
    std::string suite = "all";

    // common
    std::string out_dir;  // empty: $KELVSIM_OUTDIR or ./kelvsim-out
    uint64_t seed = 1;
    double construction_tol = 1e-12;
};

nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

/// Load the "params" object of a run manifest.
ScenarioConfig scenario_from_manifest(const std::string& manifest_path);

/// Execute the scenario: writes CSV/JSON outputs plus run_manifest.json into
/// the output directory, prints a short summary, and returns an exit code
/// (kExitOk or kExitVerifyFailure; config/numeric problems throw).
int run_scenario(const ScenarioConfig& cfg);

}  // namespace kelvsim
