#pragma once

#include <Eigen/Dense>

#include <optional>

#include "optomech/core/covariance.hpp"
#include "optomech/core/lyapunov.hpp"
#include "optomech/models/mean_fields.hpp"
#include "optomech/models/params.hpp"

namespace optomech::models {

// Canonical mode order of the builders: (M, C) for the two-mode system and
// (M, C, A) for the three-mode one, basis (q1,p1,q2,p2,...), vacuum 1/2.
struct SystemModel {
    DriftMatrix drift;
    DiffusionMatrix diffusion;
    BasisPermutation paper_to_canonical;
    struct Constants {
        double g0 = 0.0;       // single-photon optomechanical rate chi*x_zpf, 1/s
        double g_mech = 0.0;   // field-enhanced mechanical coupling in K, 1/s
        double g_atom = 0.0;   // field-enhanced atomic coupling in K, 1/s
        double kappa = 0.0;
        double eta = 0.0;
        double n_bar = 0.0;
        double alpha_s = 0.0;
        double delta = 0.0;
        double omega_m = 0.0;
        double omega_b = 0.0;
        double gamma = 0.0;
    } constants;
    int n_modes = 0;
};

// Two-mode (mirror + cavity) model of the linearized dynamics, canonical
// basis (q,p,x,y). The drift couples position to the amplitude quadrature at
// the rate G = chi sqrt(hbar / 2 m omega_m); D = diag[0, gamma(2nbar+1),
// kappa, kappa].
inline SystemModel build_two_mode(const MechanicalParams& mech, const CavityParams& cavity,
                                  const MeanFields& mf) {
    mech.validate();
    cavity.validate();
    const double kappa = cavity.kappa();
    const double g = cavity.g0(mech);
    const double delta = mf.delta;
    const double nbar = mech.n_bar();

    Eigen::MatrixXd k(4, 4);
    k << 0, mech.omega_m, 0, 0,
        -mech.omega_m, -mech.gamma, g, 0,
        0, 0, -kappa, delta,
        g, 0, -delta, -kappa;
    Eigen::VectorXd d(4);
    d << 0, mech.gamma * (2.0 * nbar + 1.0), kappa, kappa;

    SystemModel model;
    model.drift = DriftMatrix(k);
    model.diffusion = DiffusionMatrix(d.asDiagonal());
    // the paper's fluctuation vector (x, y, q, p) -> canonical (q, p, x, y)
    model.paper_to_canonical = BasisPermutation({2, 3, 0, 1});
    model.constants = {g,     g,  0.0,  kappa,        cavity.eta(), nbar,
                       mf.alpha_s, delta, mech.omega_m, 0.0,          mech.gamma};
    model.n_modes = 2;
    return model;
}

// Three-mode (mirror + cavity + Bogoliubov) model, canonical order (M, C, A),
// normalized to dimensionless quadratures on every mode. The printed matrix
// (basis x,y,q,p,Q,P, dimensional mirror variables) maps onto couplings
// g_mech = 2 alpha_s chi x_zpf and g_atom = 2 alpha_s zeta; the Bogoliubov
// pair carries no damping and no diffusion.
inline SystemModel build_three_mode(const MechanicalParams& mech, const CavityParams& cavity,
                                    const BecParams& bec, const MeanFields& mf) {
    mech.validate();
    cavity.validate();
    bec.validate();
    const double kappa = cavity.kappa();
    const double g0 = cavity.g0(mech);
    const double gm = 2.0 * mf.alpha_s * g0;
    const double ga = 2.0 * mf.alpha_s * bec.zeta;
    const double delta = mf.delta;
    const double nbar = mech.n_bar();
    const double wm = mech.omega_m, wb = bec.omega_b;

    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(6, 6);
    // mirror (q, p)
    k(0, 1) = wm;
    k(1, 0) = -wm;
    k(1, 1) = -mech.gamma;
    k(1, 2) = gm;
    // cavity (x, y)
    k(2, 2) = -kappa;
    k(2, 3) = delta;
    k(3, 2) = -delta;
    k(3, 3) = -kappa;
    k(3, 0) = gm;
    k(3, 4) = -ga;
    // Bogoliubov (Q, P)
    k(4, 5) = wb;
    k(5, 4) = -wb;
    k(5, 2) = -ga;

    Eigen::VectorXd d(6);
    d << 0, mech.gamma * (2.0 * nbar + 1.0), kappa, kappa, 0, 0;

    SystemModel model;
    model.drift = DriftMatrix(k);
    model.diffusion = DiffusionMatrix(d.asDiagonal());
    // paper order (x, y, q, p, Q, P) -> canonical (q, p, x, y, Q, P)
    model.paper_to_canonical = BasisPermutation({2, 3, 0, 1, 4, 5});
    model.constants = {g0, gm, ga, kappa, cavity.eta(), nbar, mf.alpha_s, delta,
                       wm, wb, mech.gamma};
    model.n_modes = 3;
    return model;
}

// Initial covariance of the time-resolved runs: thermal mirror, vacuum cavity
// and vacuum Bogoliubov mode, canonical (M, C, A).
inline CovarianceMatrix three_mode_initial(const MechanicalParams& mech) {
    Eigen::VectorXd diag(6);
    const double v = mech.v_thermal();
    diag << v, v, 1, 1, 1, 1;
    return CovarianceMatrix(0.5 * diag.asDiagonal().toDenseMatrix());
}

}  // namespace optomech::models
