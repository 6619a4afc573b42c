#include "kelvsim/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "kelvsim/io.hpp"
#include "kelvsim/rng.hpp"
#include "kelvsim/verify.hpp"
#include "kelvsim/version.hpp"

namespace kelvsim {

namespace fs = std::filesystem;

namespace {

json vec_json(const Vec3& v) { return json{v[0], v[1], v[2]}; }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ValidationError("manifest: expected [x,y,z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

CVec3 pure_imaginary(const Vec3& im) {
    return {Complex(0.0, im[0]), Complex(0.0, im[1]), Complex(0.0, im[2])};
}

json cvec_json(const CVec3& v) {
    return json{{"re", {v[0].real(), v[1].real(), v[2].real()}},
                {"im", {v[0].imag(), v[1].imag(), v[2].imag()}}};
}

}  // namespace

json scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["scenario"] = c.scenario;
    j["base"] = c.base;
    j["k0"] = vec_json(c.k0);
    j["v0_im"] = vec_json(c.v0_im);
    j["v0_re"] = vec_json(c.v0_re);
    j["nu"] = c.nu;
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["method"] = c.method;
    j["abs_tol"] = c.abs_tol;
    j["rel_tol"] = c.rel_tol;
    j["output_every"] = c.output_every;
    j["reproject"] = c.reproject;
    j["n_theta"] = c.n_theta;
    j["n_phi"] = c.n_phi;
    j["k_mag"] = c.k_mag;
    j["steps_per_period"] = c.steps_per_period;
    j["ensemble_path"] = c.ensemble_path;
    j["closure"] = c.closure;
    j["cross_scale"] = c.cross_scale;
    j["k_low"] = vec_json(c.k_low);
    j["k_high"] = vec_json(c.k_high);
    j["v_low_im"] = vec_json(c.v_low_im);
    j["v_high_im"] = vec_json(c.v_high_im);
    j["amplitude_ratio"] = c.amplitude_ratio;
    j["check"] = c.check;
    j["random_pairs"] = c.random_pairs;
    j["ratios"] = c.ratios;
    j["envelope_width"] = c.envelope_width;
    j["quadrature_n"] = c.quadrature_n;
    j["deltas"] = c.deltas;
    j["residual_time"] = c.residual_time;
    j["suite"] = c.suite;
    j["seed"] = c.seed;
    j["construction_tol"] = c.construction_tol;
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig c;
    c.scenario = j.value("scenario", c.scenario);
    c.base = j.value("base", c.base);
    if (j.contains("k0")) c.k0 = vec_from_json(j["k0"]);
    if (j.contains("v0_im")) c.v0_im = vec_from_json(j["v0_im"]);
    if (j.contains("v0_re")) c.v0_re = vec_from_json(j["v0_re"]);
    c.nu = j.value("nu", c.nu);
    c.dt = j.value("dt", c.dt);
    c.t_end = j.value("t_end", c.t_end);
    c.method = j.value("method", c.method);
    c.abs_tol = j.value("abs_tol", c.abs_tol);
    c.rel_tol = j.value("rel_tol", c.rel_tol);
    c.output_every = j.value("output_every", c.output_every);
    c.reproject = j.value("reproject", c.reproject);
    c.n_theta = j.value("n_theta", c.n_theta);
    c.n_phi = j.value("n_phi", c.n_phi);
    c.k_mag = j.value("k_mag", c.k_mag);
    c.steps_per_period = j.value("steps_per_period", c.steps_per_period);
    c.ensemble_path = j.value("ensemble_path", c.ensemble_path);
    c.closure = j.value("closure", c.closure);
    c.cross_scale = j.value("cross_scale", c.cross_scale);
    if (j.contains("k_low")) c.k_low = vec_from_json(j["k_low"]);
    if (j.contains("k_high")) c.k_high = vec_from_json(j["k_high"]);
    if (j.contains("v_low_im")) c.v_low_im = vec_from_json(j["v_low_im"]);
    if (j.contains("v_high_im")) c.v_high_im = vec_from_json(j["v_high_im"]);
    c.amplitude_ratio = j.value("amplitude_ratio", c.amplitude_ratio);
    c.check = j.value("check", c.check);
    c.random_pairs = j.value("random_pairs", c.random_pairs);
    if (j.contains("ratios")) c.ratios = j["ratios"].get<std::vector<double>>();
    c.envelope_width = j.value("envelope_width", c.envelope_width);
    c.quadrature_n = j.value("quadrature_n", c.quadrature_n);
    if (j.contains("deltas")) c.deltas = j["deltas"].get<std::vector<double>>();
    c.residual_time = j.value("residual_time", c.residual_time);
    c.suite = j.value("suite", c.suite);
    c.seed = j.value("seed", c.seed);
    c.construction_tol = j.value("construction_tol", c.construction_tol);
    return c;
}

ScenarioConfig scenario_from_manifest(const std::string& manifest_path) {
    json doc;
    try {
        doc = json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("manifest parse error: ") + e.what());
    }
    if (!doc.contains("params")) throw ValidationError("manifest: missing 'params' object");
    return scenario_from_json(doc["params"]);
}

namespace {

SimulationConfig sim_config(const ScenarioConfig& c) {
    SimulationConfig s;
    s.nu = c.nu;
    s.dt = c.dt;
    s.t_end = c.t_end;
    if (c.method == "rk4")
        s.method = IntegratorMethod::Rk4;
    else if (c.method == "rk45")
        s.method = IntegratorMethod::Rk45Adaptive;
    else
        throw ValidationError("method must be rk4 or rk45, got '" + c.method + "'");
    s.abs_tol = c.abs_tol;
    s.rel_tol = c.rel_tol;
    s.output_every = c.output_every;
    s.reproject = c.reproject;
    return s;
}

ClosureSpec parse_closure(const std::string& text) {
    if (text == "full") return ClosureSpec::ds_full_sum();
    if (text.rfind("ball:", 0) == 0) {
        const double rho = std::strtod(text.c_str() + 5, nullptr);
        return ClosureSpec::ball_restricted(rho);
    }
    if (text.rfind("external:", 0) == 0)
        return ClosureSpec::external_flow(base_flow_matrix(parse_base_flow(text.substr(9))));
    throw ValidationError("closure must be full|ball:RHO|external:<base-flow>, got '" + text +
                          "'");
}

fs::path resolve_out_dir(const ScenarioConfig& c) {
    fs::path dir;
    if (!c.out_dir.empty()) {
        dir = c.out_dir;
    } else if (const char* env = std::getenv("KELVSIM_OUTDIR")) {
        dir = env;
    } else {
        dir = "kelvsim-out";
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ValidationError("cannot create output directory " + dir.string());
    return dir;
}

KelvinMode scenario_mode(const ScenarioConfig& c) {
    CVec3 v;
    for (int i = 0; i < 3; ++i) v[i] = Complex(c.v0_re[i], c.v0_im[i]);
    return make_kelvin_mode(c.k0, v, c.construction_tol);
}

int run_mode(const ScenarioConfig& c, const fs::path& out, std::vector<std::string>& files) {
    const Mat3 A = base_flow_matrix(parse_base_flow(c.base), c.construction_tol);
    const ModeTrajectory traj = integrate_mode(scenario_mode(c), A, sim_config(c));
    write_mode_trajectory_csv(out / "trajectory.csv", traj);
    files.push_back("trajectory.csv");
    std::printf("mode: %zu samples, final |k| = %s, final energy = %s\n", traj.size(),
                format_double(traj.k_norm.back()).c_str(),
                format_double(traj.energy.back()).c_str());
    return kExitOk;
}

int run_floquet(const ScenarioConfig& c, const fs::path& out, std::vector<std::string>& files) {
    const Mat3 A = base_flow_matrix(parse_base_flow(c.base), c.construction_tol);
    if (c.n_theta > 0 && c.n_phi > 0) {
        const OrientationScan scan =
            orientation_scan(A, c.nu, c.n_theta, c.n_phi, c.k_mag, c.steps_per_period);
        write_scan_csv(out / "scan.csv", scan);
        write_text_file(out / "scan_summary.json", scan_summary_json(scan, c.base).dump(2) + "\n");
        files.push_back("scan.csv");
        files.push_back("scan_summary.json");
        std::printf("floquet scan: max growth rate = %s\n",
                    format_double(scan.max_growth).c_str());
    } else {
        const MonodromyResult result = monodromy(A, c.k0, c.nu, c.steps_per_period);
        write_text_file(out / "monodromy.json", monodromy_json(result).dump(2) + "\n");
        files.push_back("monodromy.json");
        std::printf("floquet: period = %s, growth rate = %s\n",
                    format_double(result.period).c_str(),
                    format_double(result.growth_rate).c_str());
    }
    return kExitOk;
}

int run_ds(const ScenarioConfig& c, const fs::path& out, std::vector<std::string>& files) {
    if (c.cross_scale) {
        const KelvinMode low = make_kelvin_mode(c.k_low, pure_imaginary(c.v_low_im));
        const KelvinMode high = make_kelvin_mode(c.k_high, pure_imaginary(c.v_high_im));
        const CrossScaleReport rep =
            cross_scale_experiment(low, high, c.amplitude_ratio, c.nu, sim_config(c));
        json j = cross_scale_report_json(rep);
        j["parameters"] = {{"k_low", {c.k_low[0], c.k_low[1], c.k_low[2]}},
                           {"k_high", {c.k_high[0], c.k_high[1], c.k_high[2]}},
                           {"amplitude_ratio", c.amplitude_ratio},
                           {"nu", c.nu},
                           {"t_end", c.t_end}};
        write_text_file(out / "cross_scale.json", j.dump(2) + "\n");
        files.push_back("cross_scale.json");
        std::printf("cross-scale: full-sum deviation = %s, ball-restricted deviation = %s\n",
                    format_double(rep.trajectory_deviation).c_str(),
                    format_double(rep.ball_deviation).c_str());
        return kExitOk;
    }

    if (c.ensemble_path.empty())
        throw ValidationError("ds scenario needs --ensemble <file.json> (or --cross-scale)");
    if (!fs::exists(c.ensemble_path))
        throw ValidationError("ensemble file does not exist: " + c.ensemble_path);
    const ModeEnsemble ensemble = read_ensemble_json(c.ensemble_path, c.construction_tol);
    const ClosureSpec closure = parse_closure(c.closure);
    const EnsembleTrajectory traj = evolve_ensemble(ensemble, c.nu, closure, sim_config(c));
    write_gradient_csv(out / "gradient.csv", traj);
    files.push_back("gradient.csv");
    for (size_t m = 0; m < traj.n_modes(); ++m) {
        const std::string name = "mode_" + std::to_string(m) + ".csv";
        write_ensemble_mode_csv(out / name, traj, m);
        files.push_back(name);
    }
    std::printf("ds: %zu modes, %zu samples, final total energy = %s\n", traj.n_modes(),
                traj.n_samples(), format_double(traj.total_energy.back()).c_str());
    return kExitOk;
}

int run_audit(const ScenarioConfig& c, const fs::path& out, std::vector<std::string>& files) {
    if (c.check == "zero-mode") {
        Rng rng(c.seed);
        std::vector<KelvinMode> modes;
        for (int i = 0; i < c.random_pairs; ++i) {
            const Vec3 k = rng.nonzero_vec3();
            const CVec3 p = incompressible_projection(k, rng.vec3(-1.0, 1.0));
            CVec3 v;
            for (int d = 0; d < 3; ++d) v[d] = Complex(0.0, p[d].real());
            modes.push_back({k, v});
        }
        const ModeEnsemble e = make_ensemble(std::move(modes), true);
        const CVec3 conv = convolution_at_zero(e);
        const double scale = convolution_scale(e);
        const double defect = norm(conv) / std::max(scale, 1e-300);
        const bool pass = defect <= 1e-13;
        json j{{"check", "zero-mode"},
               {"random_pairs", c.random_pairs},
               {"seed", c.seed},
               {"convolution", cvec_json(conv)},
               {"scale", scale},
               {"relative_defect", defect},
               {"pass", pass}};
        write_text_file(out / "zero_mode.json", j.dump(2) + "\n");
        files.push_back("zero_mode.json");
        std::printf("%s zero-mode identity: relative defect = %s (bound 1e-13)\n",
                    pass ? "PASS" : "FAIL", format_double(defect).c_str());
        return pass ? kExitOk : kExitVerifyFailure;
    }
    if (c.check == "nonlocal") {
        const double kn = norm(c.k0);
        std::string csv = "ratio,relative_error,quadrature_warning\n";
        json reports = json::array();
        for (double ratio : c.ratios) {
            const ConvolutionReport rep =
                nonlocal_approx_error(c.k0, c.envelope_width, ratio * kn, c.quadrature_n);
            csv += format_double(rep.separation_ratio) + "," +
                   format_double(rep.relative_error) + "," +
                   (rep.quadrature_warning ? "1" : "0") + "\n";
            reports.push_back(convolution_report_json(rep));
            std::printf("nonlocal: ratio %s -> relative error %s\n",
                        format_double(rep.separation_ratio).c_str(),
                        format_double(rep.relative_error).c_str());
        }
        write_text_file(out / "nonlocal.csv", csv);
        write_text_file(out / "nonlocal.json", reports.dump(2) + "\n");
        files.push_back("nonlocal.csv");
        files.push_back("nonlocal.json");
        return kExitOk;
    }
    if (c.check == "pde-residual") {
        const Mat3 A = base_flow_matrix(parse_base_flow(c.base), c.construction_tol);
        SimulationConfig sim = sim_config(c);
        sim.output_every = 1 << 20;
        std::string csv = "delta,residual_norm,reference_norm\n";
        json reports = json::array();
        for (double delta : c.deltas) {
            const ResidualReport rep =
                pde_residual_check(A, c.k0, delta * norm(c.k0), c.residual_time, c.nu, sim);
            csv += format_double(rep.stencil_delta) + "," + format_double(rep.residual_norm) +
                   "," + format_double(rep.reference_norm) + "\n";
            reports.push_back(residual_report_json(rep));
            std::printf("pde-residual: delta %s -> residual %s\n",
                        format_double(rep.stencil_delta).c_str(),
                        format_double(rep.residual_norm).c_str());
        }
        write_text_file(out / "residual.csv", csv);
        write_text_file(out / "residual.json", reports.dump(2) + "\n");
        files.push_back("residual.csv");
        files.push_back("residual.json");
        return kExitOk;
    }
    throw ValidationError("audit check must be zero-mode|nonlocal|pde-residual, got '" + c.check +
                          "'");
}

int run_verify(const ScenarioConfig& c, const fs::path& out, std::vector<std::string>& files) {
    const auto start = std::chrono::steady_clock::now();
    const auto checks = verify::run_suite(c.suite, c.seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    verify::print_checks(checks);
    const json j = verify::checks_to_json(c.suite, c.seed, checks, secs);
    write_text_file(out / ("verify_" + c.suite + ".json"), j.dump(2) + "\n");
    files.push_back("verify_" + c.suite + ".json");
    const bool ok = verify::all_passed(checks);
    std::printf("%s verify %s: %zu checks, %s\n", ok ? "PASS" : "FAIL", c.suite.c_str(),
                checks.size(), ok ? "all passed" : "FAILURES PRESENT");
    return ok ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path out = resolve_out_dir(cfg);
    std::vector<std::string> files;

    int code = kExitOk;
    if (cfg.scenario == "mode")
        code = run_mode(cfg, out, files);
    else if (cfg.scenario == "floquet")
        code = run_floquet(cfg, out, files);
    else if (cfg.scenario == "ds")
        code = run_ds(cfg, out, files);
    else if (cfg.scenario == "audit")
        code = run_audit(cfg, out, files);
    else if (cfg.scenario == "verify")
        code = run_verify(cfg, out, files);
    else
        throw ValidationError("unknown scenario '" + cfg.scenario + "'");

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest;
    manifest["tool"] = "kelvsim";
    manifest["version"] = kVersion;
    manifest["scenario"] = cfg.scenario;
    manifest["params"] = scenario_to_json(cfg);
    manifest["outputs"] = files;
    manifest["exit_code"] = code;
    manifest["wall_time_s"] = secs;
    write_text_file(out / "run_manifest.json", manifest.dump(2) + "\n");
    return code;
}

}  // namespace kelvsim
