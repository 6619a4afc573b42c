#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "kelvsim/io.hpp"
#include "kelvsim/scenario.hpp"

using namespace kelvsim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kelvsim_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(KELVSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("scenario round trip through json") {
    ScenarioConfig cfg;
    cfg.scenario = "floquet";
    cfg.base = "elliptic:1.5,1";
    cfg.k0 = {0.3, 0.4, 0.5};
    cfg.nu = 0.25;
    cfg.seed = 99;
    cfg.ratios = {0.4, 0.1};
    const ScenarioConfig back = scenario_from_json(scenario_to_json(cfg));
    CHECK(back.scenario == cfg.scenario);
    CHECK(back.base == cfg.base);
    CHECK(back.k0[2] == cfg.k0[2]);
    CHECK(back.nu == cfg.nu);
    CHECK(back.seed == cfg.seed);
    CHECK(back.ratios == cfg.ratios);
}

TEST_CASE("mode scenario writes a trajectory and a replayable manifest") {
    const fs::path dir = fresh_dir("mode");
    ScenarioConfig cfg;
    cfg.scenario = "mode";
    cfg.base = "rotation:1";
    cfg.k0 = {1, 0, 0};
    cfg.v0_im = {0, 0, 1};
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    cfg.out_dir = dir.string();
    CHECK(run_scenario(cfg) == kExitOk);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "run_manifest.json"));

    // |k| and |v| drift stay small on the rotation preset (first data line
    // and last data line carry the same norms up to 1e-8)
    const std::string csv = read_text_file(dir / "trajectory.csv");
    CHECK(csv.rfind("t,k1,k2,k3,", 0) == 0);

    // replay from the manifest into a second directory: identical bytes
    const fs::path dir2 = fresh_dir("mode_replay");
    ScenarioConfig replay = scenario_from_manifest((dir / "run_manifest.json").string());
    replay.out_dir = dir2.string();
    CHECK(run_scenario(replay) == kExitOk);
    CHECK(read_text_file(dir2 / "trajectory.csv") == csv);
}

TEST_CASE("ensemble json ingestion") {
    const fs::path dir = fresh_dir("ens");
    const fs::path file = dir / "ensemble.json";
    write_text_file(file, R"({
      "point_symmetric": true,
      "modes": [
        {"k": [1, 0, 0], "v_im": [0, 1, 0]},
        {"k": [0, 2, 0], "v_im": [0.5, 0, 0]}
      ]
    })");
    const ModeEnsemble e = read_ensemble_json(file);
    CHECK(e.modes.size() == 2);
    CHECK(e.point_symmetric);
    CHECK(e.modes[1].v[0] == Complex(0.0, 0.5));

    // round trip
    const ModeEnsemble back = parse_ensemble_json(ensemble_to_json(e));
    CHECK(back.modes.size() == 2);
    CHECK(back.modes[1].k[1] == 2.0);

    write_text_file(file, "{ not json");
    CHECK_THROWS_AS(read_ensemble_json(file), ValidationError);
    write_text_file(file, R"({"modes": [{"k": [0,0,0], "v_im": [0,1,0]}]})");
    CHECK_THROWS_AS(read_ensemble_json(file), ValidationError);
}

TEST_CASE("ds scenario consumes an ensemble file") {
    const fs::path dir = fresh_dir("ds");
    const fs::path file = dir / "ensemble.json";
    write_text_file(file, R"({
      "point_symmetric": true,
      "modes": [
        {"k": [1, 0, 0], "v_im": [0, 1, 0]},
        {"k": [0, 2, 0], "v_im": [0.5, 0, 0]}
      ]
    })");
    ScenarioConfig cfg;
    cfg.scenario = "ds";
    cfg.ensemble_path = file.string();
    cfg.closure = "full";
    cfg.dt = 1e-2;
    cfg.t_end = 0.5;
    cfg.out_dir = dir.string();
    CHECK(run_scenario(cfg) == kExitOk);
    CHECK(fs::exists(dir / "gradient.csv"));
    CHECK(fs::exists(dir / "mode_0.csv"));
    CHECK(fs::exists(dir / "mode_1.csv"));

    cfg.ensemble_path = (dir / "missing.json").string();
    CHECK_THROWS_AS(run_scenario(cfg), ValidationError);
}

TEST_CASE("csv column contracts are stable") {
    const fs::path dir = fresh_dir("headers");
    ScenarioConfig cfg;
    cfg.scenario = "mode";
    cfg.t_end = 0.1;
    cfg.dt = 0.05;
    cfg.out_dir = dir.string();
    REQUIRE(run_scenario(cfg) == kExitOk);
    const std::string traj = read_text_file(dir / "trajectory.csv");
    CHECK(traj.substr(0, traj.find('\n')) ==
          "t,k1,k2,k3,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,energy,defect,p_re,p_im");

    const fs::path file = dir / "ens.json";
    write_text_file(file,
                    R"({"point_symmetric": true, "modes": [{"k": [1,0,0], "v_im": [0,1,0]}]})");
    cfg.scenario = "ds";
    cfg.ensemble_path = file.string();
    REQUIRE(run_scenario(cfg) == kExitOk);
    const std::string grad = read_text_file(dir / "gradient.csv");
    CHECK(grad.substr(0, grad.find('\n')) ==
          "t,a11,a12,a13,a21,a22,a23,a31,a32,a33,trace,total_energy,max_defect,"
          "admissibility_defect");
    const std::string mode0 = read_text_file(dir / "mode_0.csv");
    CHECK(mode0.substr(0, mode0.find('\n')) ==
          "t,k1,k2,k3,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,energy,defect");
}

TEST_CASE("cli: ds ball-closure runs are byte-identical") {
    const fs::path a = fresh_dir("ds_det_a");
    const fs::path b = fresh_dir("ds_det_b");
    const fs::path file = a / "ens.json";
    write_text_file(file, R"({
      "point_symmetric": true,
      "modes": [
        {"k": [1, 0, 0], "v_im": [0, 0.4, 0.2]},
        {"k": [0, 0, 2], "v_im": [0.3, -0.1, 0]}
      ]
    })");
    const std::string flags = "ds --ensemble " + file.string() +
                              " --closure ball:0.3 --nu 0.01 --t-end 0.5 --out ";
    REQUIRE(run_cli(flags + a.string()) == 0);
    REQUIRE(run_cli(flags + b.string()) == 0);
    CHECK(read_text_file(a / "gradient.csv") == read_text_file(b / "gradient.csv"));
    CHECK(read_text_file(a / "mode_0.csv") == read_text_file(b / "mode_0.csv"));
    CHECK(read_text_file(a / "mode_1.csv") == read_text_file(b / "mode_1.csv"));
}

TEST_CASE("cli: determinism of repeated runs (byte-identical csv)") {
    const fs::path a = fresh_dir("cli_a");
    const fs::path b = fresh_dir("cli_b");
    const std::string flags =
        "mode --base elliptic:1.5,1 --k 1,0.2,0.4 --v 0,0.37,-0.185 --nu 0.01 --t-end 1 --out ";
    REQUIRE(run_cli(flags + a.string()) == 0);
    REQUIRE(run_cli(flags + b.string()) == 0);
    CHECK(read_text_file(a / "trajectory.csv") == read_text_file(b / "trajectory.csv"));
}

TEST_CASE("cli: audit zero-mode prints PASS and exits 0") {
    const fs::path dir = fresh_dir("cli_audit");
    CHECK(run_cli("audit --check zero-mode --random-pairs 100 --seed 7 --out " + dir.string()) ==
          0);
    const json j = json::parse(read_text_file(dir / "zero_mode.json"));
    CHECK(j["pass"].get<bool>());
    CHECK(j["relative_defect"].get<double>() <= 1e-13);
}

TEST_CASE("cli: exit codes for config and verification classes") {
    const fs::path dir = fresh_dir("cli_err");
    // unknown base flow -> config error (2)
    CHECK(run_cli("mode --base vortex:1 --out " + dir.string()) == kExitConfigError);
    // bad flag value -> config error (2)
    CHECK(run_cli("mode --method rk9 --out " + dir.string()) == kExitConfigError);
    CHECK(run_cli("floquet --scan 3xq --out " + dir.string()) == kExitConfigError);
    // ds without ensemble -> config error
    CHECK(run_cli("ds --out " + dir.string()) == kExitConfigError);
}

TEST_CASE("cli: replay produces byte-identical outputs") {
    const fs::path a = fresh_dir("cli_replay_a");
    const fs::path b = fresh_dir("cli_replay_b");
    REQUIRE(run_cli("floquet --base elliptic:1.5,1 --scan 6x6 --out " + a.string()) == 0);
    REQUIRE(run_cli("--replay " + (a / "run_manifest.json").string() + " --replay-out " +
                    b.string()) == 0);
    CHECK(read_text_file(a / "scan.csv") == read_text_file(b / "scan.csv"));
    CHECK(read_text_file(a / "scan_summary.json") == read_text_file(b / "scan_summary.json"));
}

TEST_CASE("cli: config file options are applied and flags win") {
    const fs::path dir = fresh_dir("cli_cfg");
    const fs::path cfgfile = dir / "run.ini";
    write_text_file(cfgfile, "[mode]\nbase = shear:1\nt-end = 0.5\ndt = 0.01\n");
    REQUIRE(run_cli("--config " + cfgfile.string() + " mode --out " + dir.string()) == 0);
    const json manifest = json::parse(read_text_file(dir / "run_manifest.json"));
    CHECK(manifest["params"]["base"] == "shear:1");
    CHECK(manifest["params"]["t_end"] == 0.5);

    const fs::path dir2 = fresh_dir("cli_cfg2");
    REQUIRE(run_cli("--config " + cfgfile.string() + " mode --base rotation:2 --out " +
                    dir2.string()) == 0);
    const json manifest2 = json::parse(read_text_file(dir2 / "run_manifest.json"));
    CHECK(manifest2["params"]["base"] == "rotation:2");
}

TEST_CASE("env var supplies the default output directory") {
    const fs::path dir = fresh_dir("envdir");
    setenv("KELVSIM_OUTDIR", dir.c_str(), 1);
    ScenarioConfig cfg;
    cfg.scenario = "mode";
    cfg.t_end = 0.1;
    cfg.dt = 1e-2;
    cfg.out_dir.clear();
    CHECK(run_scenario(cfg) == kExitOk);
    unsetenv("KELVSIM_OUTDIR");
    CHECK(fs::exists(dir / "trajectory.csv"));
}

TEST_CASE("verify scenario: analytic suite passes and emits a report") {
    const fs::path dir = fresh_dir("verify");
    ScenarioConfig cfg;
    cfg.scenario = "verify";
    cfg.suite = "analytic";
    cfg.out_dir = dir.string();
    CHECK(run_scenario(cfg) == kExitOk);
    const json j = json::parse(read_text_file(dir / "verify_analytic.json"));
    CHECK(j["passed"].get<bool>());
    CHECK(j["n_failed"].get<int>() == 0);
}
