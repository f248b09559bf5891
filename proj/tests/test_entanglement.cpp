#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "optomech/core/lyapunov.hpp"
#include "optomech/entanglement/logneg.hpp"
#include "optomech/entanglement/tripartite.hpp"
#include "optomech/models/mean_fields.hpp"
#include "optomech/models/system_model.hpp"

using namespace optomech;
using namespace optomech::ent;

namespace {

// random single-mode symplectic: rotation * squeeze * rotation
Eigen::Matrix2d random_local_symplectic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    std::uniform_real_distribution<double> sq(-0.7, 0.7);
    auto rot = [](double t) {
        Eigen::Matrix2d r;
        r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
        return r;
    };
    Eigen::Matrix2d z = Eigen::Matrix2d::Zero();
    const double r = sq(rng);
    z(0, 0) = std::exp(r);
    z(1, 1) = std::exp(-r);
    return rot(angle(rng)) * z * rot(angle(rng));
}

models::SystemModel section4_model(double temperature, double delta_over_wm = 2.0,
                                   double chi = 100.0, double zeta = 100.0,
                                   double omega_b_over_wm = 1.0) {
    models::MechanicalParams mech{2 * M_PI * 3e6, 50e-9, 2 * M_PI * 3e6 / 3e4, temperature};
    models::CavityParams cavity;
    cavity.length = 1e-3;
    cavity.pump_wavelength = 1064e-9;
    cavity.omega_c = 2 * M_PI * constants::c_light / cavity.pump_wavelength;
    cavity.finesse = 1e4;
    cavity.pump_power = 50e-3;
    cavity.coupling_rate = chi;
    models::BecParams bec;
    bec.omega_b = omega_b_over_wm * mech.omega_m;
    bec.zeta = zeta;
    auto mf = models::mean_fields(mech, cavity, bec,
                                  models::DetuningSpec::total(delta_over_wm * mech.omega_m));
    return models::build_three_mode(mech, cavity, bec, mf);
}

}  // namespace

TEST_CASE("log negativity basics") {
    CHECK(log_negativity(CovarianceMatrix::vacuum(2), {{0}, {1}}) == 0.0);

    auto tmsv = CovarianceMatrix::two_mode_squeezed(0.4);
    CHECK_THAT(log_negativity(tmsv, {{0}, {1}}), Catch::Matchers::WithinRel(0.8, 1e-10));

    CovarianceMatrix bad(0.1 * Eigen::MatrixXd::Identity(4, 4));
    CHECK_THROWS_AS(log_negativity(bad, {{0}, {1}}), PhysicalityError);
    CHECK_THROWS_AS(log_negativity(tmsv, {{0}, {0}}), ArgumentError);
}

TEST_CASE("log negativity is invariant under local symplectics") {
    std::mt19937_64 rng(11);
    auto tmsv = CovarianceMatrix::two_mode_squeezed(0.5);
    const double e0 = log_negativity(tmsv, {{0}, {1}});
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
        s.block<2, 2>(0, 0) = random_local_symplectic(rng);
        s.block<2, 2>(2, 2) = random_local_symplectic(rng);
        CovarianceMatrix v(s * tmsv.matrix() * s.transpose());
        REQUIRE_THAT(log_negativity(v, {{0}, {1}}), Catch::Matchers::WithinAbs(e0, 1e-9));
    }
}

TEST_CASE("section 2 steady state carries no optomechanical entanglement") {
    models::MechanicalParams mech{2 * M_PI * 10e6, 5e-12, 10.0, 0.4};
    models::CavityParams cavity;
    cavity.length = 1e-3;
    cavity.omega_c = 2 * M_PI * 4e14;
    cavity.finesse = 1e4;
    cavity.pump_power = 20e-3;
    auto mf = models::mean_fields(mech, cavity, std::nullopt,
                                  models::DetuningSpec::total(0.05 * mech.omega_m));
    auto model = models::build_two_mode(mech, cavity, mf);
    auto v = solve_lyapunov(model.drift, model.diffusion);
    const double nu = min_symplectic_eigenvalue(partial_transpose(v, {1}));
    CHECK(-std::log(2.0 * nu) < 0.0);
    CHECK(log_negativity(v, {{0}, {1}}) == 0.0);
}

TEST_CASE("hybrid steady state at 10 uK is pairwise entangled except A-M") {
    auto model = section4_model(10e-6);
    REQUIRE(is_stable(model.drift));
    auto v = solve_lyapunov(model.drift, model.diffusion);
    const double e_mc = log_negativity_pair(v, 0, 1);
    const double e_ac = log_negativity_pair(v, 2, 1);
    const double e_am = log_negativity_pair(v, 2, 0);
    CHECK(e_mc > 0.0);
    CHECK(e_ac > 0.0);
    CHECK(e_am == 0.0);
    CHECK(std::abs(e_ac - e_mc) <= 0.05 * std::max(e_ac, e_mc));
}

TEST_CASE("steady-state entanglement decreases with temperature") {
    double prev_ac = 1e9, prev_mc = 1e9;
    for (double t : {1e-6, 1e-5, 5e-5}) {
        auto model = section4_model(t);
        auto v = solve_lyapunov(model.drift, model.diffusion);
        const double e_ac = log_negativity_pair(v, 2, 1);
        const double e_mc = log_negativity_pair(v, 0, 1);
        CHECK(e_ac <= prev_ac + 1e-12);
        CHECK(e_mc <= prev_mc + 1e-12);
        prev_ac = e_ac;
        prev_mc = e_mc;
    }
}

TEST_CASE("tripartite report on a product state") {
    auto rep = tripartite_report(CovarianceMatrix::vacuum(3), true, 4, 99);
    CHECK(rep.e_a_mc == 0.0);
    CHECK(rep.e_m_ac == 0.0);
    CHECK(rep.e_c_am == 0.0);
    CHECK_FALSE(rep.genuine);
    REQUIRE(rep.g_tri.has_value());
    CHECK(*rep.g_tri == 0.0);
}

TEST_CASE("tripartite witness across temperature") {
    SECTION("genuine at 10 uK") {
        auto model = section4_model(10e-6);
        auto v = solve_lyapunov(model.drift, model.diffusion);
        auto rep = tripartite_report(v, false);
        CHECK(rep.genuine);
    }
    SECTION("not genuine at 0.05 K") {
        auto model = section4_model(0.05);
        auto v = solve_lyapunov(model.drift, model.diffusion);
        auto rep = tripartite_report(v, false);
        CHECK_FALSE(rep.genuine);
    }
}

TEST_CASE("g_tri on the symmetrized hybrid state is a non-negative bound") {
    auto model = section4_model(1e-3);
    auto v = symmetrize_am(solve_lyapunov(model.drift, model.diffusion));
    REQUIRE(am_asymmetry(v) < 1e-12);
    auto rep = tripartite_report(v, true, 6, 2024);
    REQUIRE(rep.g_tri.has_value());
    CHECK(*rep.g_tri >= 0.0);
    CHECK(rep.g_tri_is_upper_bound);
}

TEST_CASE("g_tri requires A-M symmetry") {
    // mechanical damping breaks the exact exchange symmetry of the raw state
    auto model = section4_model(1e-3);
    auto v = solve_lyapunov(model.drift, model.diffusion);
    CHECK(am_asymmetry(v) > 1e-6);
    CHECK_THROWS_AS(tripartite_report(v, true, 2, 1), ArgumentError);
    // grossly asymmetric couplings stay rejected even at loose tolerance
    auto model2 = section4_model(1e-3, 2.0, 100.0, 140.0);
    auto v2 = solve_lyapunov(model2.drift, model2.diffusion);
    CHECK_THROWS_AS(tripartite_report(v2, true, 2, 1, 1e-3), ArgumentError);
}
