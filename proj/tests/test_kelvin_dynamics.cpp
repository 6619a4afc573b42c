#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kelvsim/kelvin_dynamics.hpp"

using namespace kelvsim;

namespace {

CVec3 imag_vec(double a, double b, double c) {
    return {Complex(0.0, a), Complex(0.0, b), Complex(0.0, c)};
}

}  // namespace

TEST_CASE("kelvin_rhs: stated examples") {
    // pure viscous decay
    const ModeDeriv visc = kelvin_rhs({2.0, 0.0, 0.0}, imag_vec(0.0, 1.0, 0.0), Mat3::zero(), 0.1);
    CHECK(norm(visc.dk) == 0.0);
    CHECK(visc.dv[1] == Complex(0.0, -0.4));
    CHECK(std::abs(visc.dv[0]) == 0.0);
    CHECK(std::abs(visc.dv[2]) == 0.0);

    // A=0, nu=0: everything vanishes
    const ModeDeriv zero = kelvin_rhs({1.0, 2.0, 3.0}, imag_vec(0.5, -0.2, 0.1), Mat3::zero(), 0.0);
    CHECK(norm(zero.dk) == 0.0);
    CHECK(norm(zero.dv) == 0.0);

    // rotation: dk = (0,1,0), dv = 0 for k = e1, v = e3
    const Mat3 rot = base_flow_matrix(BaseFlowSpec::rotation(1.0));
    const ModeDeriv r = kelvin_rhs({1.0, 0.0, 0.0}, to_complex(Vec3{0.0, 0.0, 1.0}), rot, 0.0);
    CHECK(r.dk[0] == 0.0);
    CHECK(r.dk[1] == 1.0);
    CHECK(r.dk[2] == 0.0);
    CHECK(norm(r.dv) == 0.0);

    CHECK_THROWS_AS(kelvin_rhs({0.0, 0.0, 0.0}, imag_vec(1, 0, 0), rot, 0.0), ValidationError);
}

TEST_CASE("pressure amplitude: stated examples") {
    CHECK(std::abs(pressure_amplitude({1.0, 2.0, 0.5}, imag_vec(1, 2, 3), Mat3::zero())) == 0.0);

    const Mat3 strain = base_flow_matrix(BaseFlowSpec::plane_strain(1.0));
    CHECK(std::abs(pressure_amplitude({1.0, 0.0, 0.0}, imag_vec(0.0, 1.0, 0.0), strain)) == 0.0);

    // k=(1,1,0), v=(i,-i,0): k.A.v = 2i, |k|^2 = 2 -> p = 2i 2i / 2 = -2
    const Complex p = pressure_amplitude({1.0, 1.0, 0.0},
                                         {Complex(0, 1), Complex(0, -1), Complex(0)}, strain);
    CHECK(p.real() == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(p.imag() == 0.0);
}

TEST_CASE("mode constructors and monitors") {
    CHECK_THROWS_AS(make_kelvin_mode({0, 0, 0}, imag_vec(1, 0, 0)), ValidationError);
    CHECK_THROWS_AS(make_kelvin_mode({1, 0, 0}, imag_vec(1, 0, 0)), ValidationError);  // k || v
    CHECK_NOTHROW(make_kelvin_mode({1, 0, 0}, imag_vec(0, 1, 0)));
    CHECK_NOTHROW(make_kelvin_mode({1, 0, 0}, CVec3{}));  // |v| = 0 legal

    const KelvinMode m{{1, 0, 0}, imag_vec(0, 1, 0)};
    CHECK(mode_energy(m) == 0.5);
    CHECK(incompressibility_defect(m) == 0.0);
    const KelvinMode parallel{{1, 0, 0}, imag_vec(1, 0, 0)};
    CHECK(incompressibility_defect(parallel) == 1.0);
}

TEST_CASE("viscous decay: v(t) = v0 exp(-nu |k|^2 t)") {
    SimulationConfig cfg;
    cfg.nu = 1.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const ModeTrajectory traj =
        integrate_mode({{1, 0, 0}, imag_vec(0, 1, 0)}, Mat3::zero(), cfg);
    const CVec3 expected = imag_vec(0.0, std::exp(-1.0), 0.0);
    CHECK(norm(traj.v.back() - expected) <= 1e-10 * norm(expected));
}

TEST_CASE("strain flow: k(t) = (e^-t, e^t, 0)") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::plane_strain(1.0));
    const KelvinMode mode =
        make_kelvin_mode({1, 1, 0}, incompressible_projection({1, 1, 0}, Vec3{0, 0, 1}));
    const ModeTrajectory traj = integrate_mode(mode, A, cfg);
    for (size_t i = 0; i < traj.size(); ++i) {
        const Vec3 exact = {std::exp(-traj.t[i]), std::exp(traj.t[i]), 0.0};
        CHECK(norm(traj.k[i] - exact) <= 1e-8 * norm(exact));
    }
}

TEST_CASE("shear flow: k2 linear in t") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    const double s = 2.0;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::shear(s));
    const Vec3 k0 = {1.5, 0.5, 0.25};
    const KelvinMode mode = make_kelvin_mode(k0, incompressible_projection(k0, Vec3{0, 0, 1}));
    const ModeTrajectory traj = integrate_mode(mode, A, cfg);
    for (size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.k[i][0] == k0[0]);  // k1 frozen
        CHECK(traj.k[i][2] == k0[2]);  // k3 frozen
        const double exact = k0[1] - s * k0[0] * traj.t[i];
        CHECK(traj.k[i][1] == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("constraint transport: defect stays below 1e-10 at nu=0") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    for (const auto& spec : {BaseFlowSpec::rotation(1.0), BaseFlowSpec::plane_strain(1.0),
                             BaseFlowSpec::shear(1.0), BaseFlowSpec::elliptic(1.5, 1.0)}) {
        const Mat3 A = base_flow_matrix(spec);
        const Vec3 k0 = {1.0, 0.7, 0.3};
        const CVec3 p = incompressible_projection(k0, Vec3{0.3, 1.0, -0.5});
        CVec3 v0;
        for (int i = 0; i < 3; ++i) v0[i] = Complex(0.0, p[i].real());
        const ModeTrajectory traj = integrate_mode({k0, v0}, A, cfg);
        for (double d : traj.defect) CHECK(d <= 1e-10);
    }
}

TEST_CASE("rotation conserves |k| and |v|") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::rotation(1.0));
    const Vec3 k0 = {1.0, 0.0, 0.5};
    const KelvinMode mode =
        make_kelvin_mode(k0, incompressible_projection(k0, Vec3{0.2, 0.9, -0.3}));
    const ModeTrajectory traj = integrate_mode(mode, A, cfg);
    const double kn0 = traj.k_norm.front(), vn0 = norm(traj.v.front());
    for (size_t i = 0; i < traj.size(); ++i) {
        CHECK(std::abs(traj.k_norm[i] - kn0) <= 1e-8 * kn0);
        CHECK(std::abs(norm(traj.v[i]) - vn0) <= 1e-8 * vn0);
    }
}

TEST_CASE("RK4 halving cuts the strain error by ~16") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::plane_strain(1.0));
    const KelvinMode mode =
        make_kelvin_mode({1, 1, 0}, incompressible_projection({1, 1, 0}, Vec3{0, 0, 1}));
    const auto err = [&](double dt) {
        SimulationConfig cfg;
        cfg.nu = 0.0;
        cfg.dt = dt;
        cfg.t_end = 1.0;
        const ModeTrajectory traj = integrate_mode(mode, A, cfg);
        return norm(traj.k.back() - Vec3{std::exp(-1.0), std::exp(1.0), 0.0});
    };
    const double ratio = err(0.05) / err(0.025);
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("adaptive integrator matches the stiff strain closed form") {
    // k-axis strain with k0 along e2: |k| = k2(0) e^{st}, and the amplitude
    // component along e3 obeys dv3/dt = -nu |k|^2 v3:
    //   v3(t) = v3(0) exp(-nu k2(0)^2 (e^{2st}-1)/(2s))
    const double s = 1.0, nu = 0.01, t_end = 3.0;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::plane_strain(s));
    const Vec3 k0 = {0.0, 1.0, 0.0};
    SimulationConfig cfg;
    cfg.nu = nu;
    cfg.dt = 1e-2;
    cfg.t_end = t_end;
    cfg.method = IntegratorMethod::Rk45Adaptive;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-10;
    const ModeTrajectory traj = integrate_mode({k0, imag_vec(0, 0, 1)}, A, cfg);
    const double visc = std::exp(-nu * (std::exp(2.0 * s * t_end) - 1.0) / (2.0 * s));
    CHECK(traj.v.back()[2].imag() == doctest::Approx(visc).epsilon(1e-6));
    CHECK(traj.k.back()[1] == doctest::Approx(std::exp(s * t_end)).epsilon(1e-7));
    for (size_t i = 1; i < traj.size(); ++i) CHECK(traj.t[i] > traj.t[i - 1]);
    CHECK(traj.t.back() == t_end);
}

TEST_CASE("adaptive integrator reports step underflow") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.method = IntegratorMethod::Rk45Adaptive;
    cfg.abs_tol = 1e-300;  // unattainable: controller shrinks h to the floor
    cfg.rel_tol = 1e-300;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::rotation(1.0));
    const KelvinMode mode =
        make_kelvin_mode({1, 0, 0}, incompressible_projection({1, 0, 0}, Vec3{0, 1, 1}));
    CHECK_THROWS_AS(integrate_mode(mode, A, cfg), IntegrationError);
}

TEST_CASE("optional per-step reprojection pins the defect at zero") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-2;
    cfg.t_end = 5.0;
    cfg.reproject = true;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const Vec3 k0 = {1.0, 0.2, 0.4};
    const KelvinMode mode =
        make_kelvin_mode(k0, incompressible_projection(k0, Vec3{0.1, 0.8, -0.4}));
    const ModeTrajectory traj = integrate_mode(mode, A, cfg);
    for (double d : traj.defect) CHECK(d <= 1e-14);
}

TEST_CASE("config validation") {
    SimulationConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
    cfg.dt = 2.0;
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
    cfg.dt = 0.5;
    cfg.nu = -1.0;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("energy law along the trajectory (nu=0, incompressible)") {
    SimulationConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::plane_strain(0.5));
    const Vec3 k0 = {1.0, 0.6, 0.4};
    const KelvinMode mode =
        make_kelvin_mode(k0, incompressible_projection(k0, Vec3{0.8, -0.2, 0.5}));
    const ModeTrajectory traj = integrate_mode(mode, A, cfg);
    double worst = 0.0, scale = 0.0;
    for (size_t i = 1; i + 1 < traj.size(); ++i) {
        const double fd = (2.0 * traj.energy[i + 1] - 2.0 * traj.energy[i - 1]) /
                          (traj.t[i + 1] - traj.t[i - 1]);
        const double law = -2.0 * inner(traj.v[i], matvec(A, traj.v[i])).real();
        worst = std::max(worst, std::abs(fd - law));
        scale = std::max(scale, std::abs(law));
    }
    CHECK(worst <= 1e-6 * scale);
}

TEST_CASE("degenerate zero amplitude stays zero") {
    SimulationConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    const Mat3 A = base_flow_matrix(BaseFlowSpec::rotation(1.0));
    const ModeTrajectory traj = integrate_mode({{1, 0, 0}, CVec3{}}, A, cfg);
    for (const CVec3& v : traj.v) CHECK(norm(v) == 0.0);
    for (double d : traj.defect) CHECK(d == 0.0);
}
