#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kelvsim/floquet_analysis.hpp"

using namespace kelvsim;

TEST_CASE("wavevector period from the gradient spectrum") {
    // circular flow: omega = 1, T = 2 pi
    const auto t1 =
        wavevector_period(base_flow_matrix(BaseFlowSpec::elliptic(1.0, 1.0)), {1, 0, 0});
    REQUIRE(t1.has_value());
    CHECK(*t1 == doctest::Approx(2.0 * M_PI).epsilon(1e-14));

    // elliptic(4,1): omega = sqrt(ab) = 2, T = pi
    const auto t2 =
        wavevector_period(base_flow_matrix(BaseFlowSpec::elliptic(4.0, 1.0)), {1, 0, 0});
    REQUIRE(t2.has_value());
    CHECK(*t2 == doctest::Approx(M_PI).epsilon(1e-14));

    // strain: real spectrum, aperiodic
    CHECK_FALSE(
        wavevector_period(base_flow_matrix(BaseFlowSpec::plane_strain(1.0)), {1, 1, 0}));
    // shear: nilpotent, aperiodic
    CHECK_FALSE(wavevector_period(base_flow_matrix(BaseFlowSpec::shear(1.0)), {1, 0.5, 0}));
    // k0 along the neutral axis: no oscillatory component
    CHECK_FALSE(
        wavevector_period(base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0)), {0, 0, 1}));
    // A = 0
    CHECK_FALSE(wavevector_period(Mat3::zero(), {1, 0, 0}));
    // k3 != 0 is fine as long as the planar part is nonzero
    CHECK(wavevector_period(base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0)), {1, 0, 2})
              .has_value());
}

TEST_CASE("monodromy on the circular flow") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.0, 1.0));

    // inviscid: all multipliers on the unit circle, growth 0. The modulus
    // bound needs the tighter 1024-step integration; the growth rate (which
    // divides by the period) already meets 1e-8 at 512 steps.
    const MonodromyResult inviscid = monodromy(A, {1, 0, 0}, 0.0, 1024);
    for (const Complex& lam : inviscid.multipliers)
        CHECK(std::abs(std::abs(lam) - 1.0) <= 1e-8);
    CHECK(std::abs(monodromy(A, {1, 0, 0}, 0.0, 512).growth_rate) <= 1e-8);

    // viscous: growth = -nu |k|^2 = -1 on the circle |k| = 1
    const MonodromyResult viscous = monodromy(A, {1, 0, 0}, 1.0, 512);
    CHECK(viscous.growth_rate == doctest::Approx(-1.0).epsilon(1e-8));

    CHECK_THROWS_AS(monodromy(base_flow_matrix(BaseFlowSpec::plane_strain(1.0)), {1, 0, 0}, 0.0,
                              512),
                    ValidationError);
    CHECK_THROWS_AS(monodromy(A, {1, 0, 0}, 0.0, 16), ValidationError);
}

TEST_CASE("determinant of the inviscid monodromy has modulus 1") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const MonodromyResult r = monodromy(A, {0.866, 0.0, 0.5}, 0.0, 512);
    CHECK(std::abs(std::abs(det(r.monodromy)) - 1.0) <= 1e-7);
}

TEST_CASE("growth rate is invariant under k0 scaling at nu=0") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const Vec3 k0 = {0.866, 0.0, 0.5};
    const double g1 = monodromy(A, k0, 0.0, 512).growth_rate;
    const double g3 = monodromy(A, 3.0 * k0, 0.0, 512).growth_rate;
    CHECK(std::abs(g1 - g3) <= 1e-9);
}

TEST_CASE("growth rate converges in steps_per_period") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const Vec3 k0 = {0.866, 0.0, 0.5};
    const double g512 = monodromy(A, k0, 0.0, 512).growth_rate;
    const double g1024 = monodromy(A, k0, 0.0, 1024).growth_rate;
    CHECK(std::abs(g512 - g1024) <= 1e-6);
}

TEST_CASE("orientation scan: circular flow is neutral everywhere") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.0, 1.0));
    const OrientationScan scan = orientation_scan(A, 0.0, 8, 8, 1.0);
    for (double g : scan.growth) {
        CHECK(!std::isnan(g));
        CHECK(std::abs(g) <= 1e-8);
    }
}

TEST_CASE("orientation scan: elliptic(1.5,1) has an unstable band") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const OrientationScan scan = orientation_scan(A, 0.0, 32, 32, 1.0);
    CHECK(scan.max_growth > 0.0);
    CHECK(scan.argmax_index >= 0);
}

TEST_CASE("orientation scan: strong viscosity damps every direction") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const OrientationScan scan = orientation_scan(A, 10.0, 8, 8, 1.0);
    for (double g : scan.growth)
        if (!std::isnan(g)) CHECK(g < 0.0);
}

TEST_CASE("orientation scan validates its grid") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    CHECK_THROWS_AS(orientation_scan(A, 0.0, 1, 8, 1.0), ValidationError);
    CHECK_THROWS_AS(orientation_scan(A, 0.0, 8, 1, 1.0), ValidationError);
}

TEST_CASE("scan determinism: repeated runs agree bitwise") {
    const Mat3 A = base_flow_matrix(BaseFlowSpec::elliptic(1.5, 1.0));
    const OrientationScan a = orientation_scan(A, 0.0, 8, 16, 1.0);
    const OrientationScan b = orientation_scan(A, 0.0, 8, 16, 1.0);
    REQUIRE(a.growth.size() == b.growth.size());
    for (size_t i = 0; i < a.growth.size(); ++i) {
        if (std::isnan(a.growth[i]))
            CHECK(std::isnan(b.growth[i]));
        else
            CHECK(a.growth[i] == b.growth[i]);
    }
}
