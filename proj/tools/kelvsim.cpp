// kelvsim - Kelvin-mode dynamics on uniform-gradient base flows, elliptical
// parametric instability, and the Dinaburg-Sinai quasi-linear closure with a
// quantitative cross-scale consistency audit.
//
// Subcommands: mode, floquet, ds, audit, verify. Every run writes its outputs
// plus a replayable run_manifest.json into the output directory.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kelvsim/scenario.hpp"
#include "kelvsim/errors.hpp"
#include "kelvsim/version.hpp"

namespace {

using kelvsim::ScenarioConfig;

void add_vec_option(CLI::App* cmd, const std::string& name, kelvsim::Vec3& target,
                    const std::string& desc) {
    cmd->add_option_function<std::vector<double>>(
           name,
           [&target, name](const std::vector<double>& vals) {
               if (vals.size() != 3)
                   throw CLI::ValidationError(name, "expects three comma-separated reals");
               target = {vals[0], vals[1], vals[2]};
           },
           desc)
        ->delimiter(',')
        ->expected(1, 3);
}

void add_common_options(CLI::App* cmd, ScenarioConfig& cfg) {
    cmd->add_option("--out", cfg.out_dir,
                    "output directory (default: $KELVSIM_OUTDIR or ./kelvsim-out)");
    cmd->add_option("--seed", cfg.seed, "seed for randomized suites");
    cmd->add_option("--construction-tol", cfg.construction_tol,
                    "relative tolerance for construction-time validity checks");
}

void add_sim_options(CLI::App* cmd, ScenarioConfig& cfg) {
    cmd->add_option("--nu", cfg.nu, "kinematic viscosity (>= 0)");
    cmd->add_option("--dt", cfg.dt, "time step (initial step for rk45)");
    cmd->add_option("--t-end", cfg.t_end, "end time");
    cmd->add_option("--method", cfg.method, "integrator: rk4 | rk45")
        ->check(CLI::IsMember({"rk4", "rk45"}));
    cmd->add_option("--abs-tol", cfg.abs_tol, "adaptive absolute tolerance");
    cmd->add_option("--rel-tol", cfg.rel_tol, "adaptive relative tolerance");
    cmd->add_option("--output-every", cfg.output_every, "record every n-th step");
    cmd->add_flag("--reproject", cfg.reproject, "re-impose k.v = 0 after each step");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kelvin-mode / quasi-linear closure simulator and verification harness"};
    app.set_version_flag("--version", std::string("kelvsim ") + kelvsim::kVersion);
    app.set_config("--config", "", "read options from an INI-style config file (flags win)");
    app.require_subcommand(0, 1);

    std::string replay_path;
    app.add_option("--replay", replay_path,
                   "re-run a scenario from a run_manifest.json (params are taken verbatim)");
    std::string replay_out;
    app.add_option("--replay-out", replay_out, "output directory for the replayed run");

    ScenarioConfig cfg;

    CLI::App* mode = app.add_subcommand("mode", "integrate one Kelvin mode on a base flow");
    mode->add_option("--base", cfg.base, "base flow: rotation:W | strain:S | shear:S | "
                                         "elliptic:A,B | custom:9 entries");
    add_vec_option(mode, "--k", cfg.k0, "initial wavevector kx,ky,kz");
    add_vec_option(mode, "--v", cfg.v0_im, "initial amplitude, imaginary parts (point-symmetric)");
    add_vec_option(mode, "--v-re", cfg.v0_re, "initial amplitude, real parts (optional)");
    add_sim_options(mode, cfg);
    add_common_options(mode, cfg);

    CLI::App* floquet = app.add_subcommand(
        "floquet", "monodromy / parametric growth on closed-streamline flows");
    floquet->add_option("--base", cfg.base, "base flow preset");
    add_vec_option(floquet, "--k", cfg.k0, "initial wavevector (single monodromy)");
    floquet->add_option("--nu", cfg.nu, "kinematic viscosity");
    floquet->add_option_function<std::string>(
        "--scan",
        [&cfg](const std::string& s) {
            int nt = 0, np = 0;
            if (std::sscanf(s.c_str(), "%dx%d", &nt, &np) != 2 || nt < 1 || np < 1)
                throw CLI::ValidationError("--scan", "expects NxM, e.g. 32x32");
            cfg.n_theta = nt;
            cfg.n_phi = np;
        },
        "orientation scan grid, e.g. 32x32");
    floquet->add_option("--kmag", cfg.k_mag, "|k0| for scan directions");
    floquet->add_option("--steps", cfg.steps_per_period, "integration steps per period");
    add_common_options(floquet, cfg);

    CLI::App* ds = app.add_subcommand(
        "ds", "evolve a quasi-linear mode ensemble under a pluggable closure");
    ds->add_option("--ensemble", cfg.ensemble_path, "ensemble initial conditions (json)");
    ds->add_option("--closure", cfg.closure, "full | ball:RHO | external:<base-flow>");
    ds->add_flag("--cross-scale", cfg.cross_scale,
                 "run the cross-scale distortion experiment instead of an ensemble file");
    add_vec_option(ds, "--k-low", cfg.k_low, "cross-scale: low wavevector");
    add_vec_option(ds, "--k-high", cfg.k_high, "cross-scale: high wavevector");
    add_vec_option(ds, "--v-low", cfg.v_low_im, "cross-scale: low amplitude (imaginary parts)");
    add_vec_option(ds, "--v-high", cfg.v_high_im, "cross-scale: high amplitude (imaginary parts)");
    ds->add_option("--amplitude-ratio", cfg.amplitude_ratio,
                   "scale factor applied to the high amplitude");
    add_sim_options(ds, cfg);
    add_common_options(ds, cfg);

    CLI::App* audit = app.add_subcommand(
        "audit", "spectral identities: zero-mode, nonlocal approximation, pde residual");
    audit->add_option("--check", cfg.check, "zero-mode | nonlocal | pde-residual")
        ->check(CLI::IsMember({"zero-mode", "nonlocal", "pde-residual"}));
    audit->add_option("--random-pairs", cfg.random_pairs, "zero-mode: number of random pairs");
    audit->add_option("--ratios", cfg.ratios, "nonlocal: separation ratios")->delimiter(',');
    audit->add_option("--envelope-width", cfg.envelope_width, "nonlocal: test field width");
    audit->add_option("--quadrature-n", cfg.quadrature_n, "nonlocal: per-axis quadrature order");
    audit->add_option("--base", cfg.base, "pde-residual: base flow");
    add_vec_option(audit, "--k", cfg.k0, "target / stencil-center wavevector");
    audit->add_option("--deltas", cfg.deltas, "pde-residual: stencil deltas relative to |k0|")
        ->delimiter(',');
    audit->add_option("--time", cfg.residual_time, "pde-residual: evaluation time");
    audit->add_option("--nu", cfg.nu, "kinematic viscosity");
    audit->add_option("--dt", cfg.dt, "integrator step");
    add_common_options(audit, cfg);

    CLI::App* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify
        ->add_option("suite", cfg.suite,
                     "invariants | analytic | convergence | inconsistency | all")
        ->check(CLI::IsMember({"invariants", "analytic", "convergence", "inconsistency", "all"}));
    add_common_options(verify, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kelvsim::kExitConfigError;
    }

    try {
        if (!replay_path.empty()) {
            ScenarioConfig replayed = kelvsim::scenario_from_manifest(replay_path);
            if (!replay_out.empty()) replayed.out_dir = replay_out;
            return kelvsim::run_scenario(replayed);
        }
        for (CLI::App* sub : {mode, floquet, ds, audit, verify}) {
            if (sub->parsed()) {
                cfg.scenario = sub->get_name();
                return kelvsim::run_scenario(cfg);
            }
        }
        std::fputs(app.help().c_str(), stdout);
        return kelvsim::kExitOk;
    } catch (const kelvsim::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kelvsim::kExitConfigError;
    } catch (const kelvsim::IntegrationError& e) {
        std::fprintf(stderr, "numeric failure at t = %g: %s\n", e.time, e.what());
        return kelvsim::kExitNumericError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kelvsim::kExitNumericError;
    }
}
