// Acceptance suite: one pass/fail line per criterion. Criteria 1-9 are
// backed by the named checks of the verify library (same thresholds the CLI
// `verify` subcommand runs); criterion 10 additionally drives the scenario
// runner twice and compares output bytes, and times the aggregate suite.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kelvsim/io.hpp"
#include "kelvsim/scenario.hpp"
#include "kelvsim/verify.hpp"

using namespace kelvsim;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string label;
    std::vector<std::string> checks;  // names in the verify suite
};

int g_failures = 0;

void report(const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] %s  %s\n", pass ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kelvsim_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

int main() {
    const uint64_t seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = verify::run_suite("all", seed);
    const double suite_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::map<std::string, verify::CheckResult> by_name;
    for (const auto& c : checks) by_name[c.name] = c;

    const std::vector<Criterion> criteria = {
        {"01 constraint-transport (defect <= 1e-10, four presets, t=10)",
         {"kelvin.constraint_transport.rotation", "kelvin.constraint_transport.strain",
          "kelvin.constraint_transport.shear", "kelvin.constraint_transport.elliptic"}},
        {"02 analytic-wavevectors (strain 1e-8, shear 1e-10, viscous 1e-10)",
         {"analytic.strain_wavevector", "analytic.shear_wavevector", "analytic.viscous_decay"}},
        {"03 rotation-conservation (|k|,|v| drift <= 1e-8 over t=10)",
         {"kelvin.rotation_conservation"}},
        {"04 floquet-sanity (neutral circle, unstable ellipse, |det|=1, converged)",
         {"analytic.circular_growth_zero", "floquet.elliptic_instability_found",
          "floquet.det_identity", "convergence.monodromy_steps"}},
        {"05 zero-mode-identity (<= 1e-13 scale, exact quadratic scaling)",
         {"audit.zero_mode_point_symmetric", "audit.zero_mode_general",
          "audit.zero_mode_quadratic_scaling"}},
        {"06 nonlocal-approximation (error decreasing, 10x drop across ratios)",
         {"convergence.nonlocal_error_monotone", "convergence.nonlocal_error_tenfold"}},
        {"07 pde-characteristics-equivalence (residual order 2 +- 0.3)",
         {"convergence.pde_residual_order.rotation", "convergence.pde_residual_order.strain",
          "convergence.pde_residual_a0"}},
        {"08 ds-consistency (trace, bitwise reduction, symmetry, convention maps)",
         {"ds.gradient_trace_zero", "ds.closure_reduction_bitwise",
          "ds.point_symmetry_preserved", "ds.convention_map_identities",
          "ds.convention_equation_equivalence"}},
        {"09 inconsistency-demonstration (full sum > 0, ball exactly 0)",
         {"inconsistency.full_sum_deviation_positive",
          "inconsistency.ball_restricted_deviation_zero"}},
    };

    for (const auto& crit : criteria) {
        bool pass = true;
        std::string detail;
        for (const std::string& name : crit.checks) {
            const auto it = by_name.find(name);
            if (it == by_name.end()) {
                pass = false;
                detail += name + "=MISSING ";
                continue;
            }
            pass = pass && it->second.pass;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s=%.3e ", name.c_str(), it->second.measured);
            detail += buf;
        }
        report(crit.label, pass, detail);
    }

    // criterion 9 also requires the emitted report with both numbers
    {
        const fs::path dir = fresh_dir("cross_scale");
        ScenarioConfig cfg;
        cfg.scenario = "ds";
        cfg.cross_scale = true;
        cfg.nu = 0.0;
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        cfg.out_dir = dir.string();
        bool pass = run_scenario(cfg) == kExitOk && fs::exists(dir / "cross_scale.json");
        std::string detail = "cross_scale.json missing";
        if (pass) {
            const json j = json::parse(read_text_file(dir / "cross_scale.json"));
            const double dev = j["trajectory_deviation"].get<double>();
            const double ball = j["ball_deviation"].get<double>();
            pass = dev > 0.0 && ball == 0.0;
            detail = "trajectory_deviation=" + format_double(dev) +
                     " ball_deviation=" + format_double(ball);
        }
        report("09b inconsistency-report-emitted", pass, detail);
    }

    // criterion 10: determinism and suite wall time
    {
        const fs::path a = fresh_dir("det_a");
        const fs::path b = fresh_dir("det_b");
        ScenarioConfig cfg;
        cfg.scenario = "mode";
        cfg.base = "elliptic:1.5,1";
        cfg.k0 = {1.0, 0.2, 0.4};
        cfg.v0_im = {0.0, 0.37, -0.185};
        cfg.nu = 0.01;
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        cfg.out_dir = a.string();
        const int ra = run_scenario(cfg);
        cfg.out_dir = b.string();
        const int rb = run_scenario(cfg);
        const bool identical =
            ra == kExitOk && rb == kExitOk &&
            read_text_file(a / "trajectory.csv") == read_text_file(b / "trajectory.csv");
        report("10a determinism (repeated runs byte-identical)", identical,
               identical ? "trajectory.csv bytes equal" : "byte mismatch");

        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f s", suite_seconds);
        report("10b aggregate-verify-under-60s", suite_seconds < 60.0, buf);
    }

    std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
