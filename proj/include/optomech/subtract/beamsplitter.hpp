#pragma once

#include <Eigen/Dense>

#include "optomech/subtract/blocks.hpp"
#include "optomech/subtract/wigner.hpp"
#include "optomech/wigner_grid.hpp"

namespace optomech::subtract {

namespace detail {

// Quadratic form of the Weyl characteristic function chi(z) =
// exp(-z^T M z / 2) in the variables z = (eta_r, eta_i, ...) for a doubled
// covariance matrix: per-mode rotation by the symplectic form.
inline Eigen::MatrixXd char_form(const Eigen::MatrixXd& sigma_doubled) {
    const int n = static_cast<int>(sigma_doubled.rows()) / 2;
    Eigen::MatrixXd rot = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        rot(2 * k, 2 * k + 1) = -1.0;
        rot(2 * k + 1, 2 * k) = 1.0;
    }
    return rot * sigma_doubled * rot.transpose();
}

// Mirror-ancilla characteristic form after the beam splitter, with the cavity
// slot pinned at zero: blocks A (mirror), B (ancilla), C (cross).
struct MirrorAncillaForm {
    Eigen::Matrix2d a, b, c;
};

inline MirrorAncillaForm bs_char_form(const TwoModeBlocks& blocks, double tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw ArgumentError("beam splitter: transmittance must lie in (0, 1)");
    const double r = std::sqrt(1.0 - tau * tau);
    Eigen::Matrix4d bs;
    bs << tau, 0, -r, 0,
          0, tau, 0, -r,
          r, 0, tau, 0,
          0, r, 0, tau;
    Eigen::MatrixXd sigma6 = Eigen::MatrixXd::Identity(6, 6);
    sigma6.topLeftCorner(4, 4) = blocks.assembled();
    Eigen::MatrixXd mix = Eigen::MatrixXd::Identity(6, 6);
    mix.bottomRightCorner(4, 4) = bs;
    const Eigen::MatrixXd sigma_bs = mix.transpose() * sigma6 * mix;
    const Eigen::MatrixXd m = char_form(sigma_bs);
    MirrorAncillaForm out;
    out.a = m.block<2, 2>(0, 0);
    out.b = m.block<2, 2>(4, 4);
    out.c = m.block<2, 2>(0, 4);
    return out;
}

inline Eigen::Vector2d k_of_delta(double dr, double di) {
    return {2.0 * di, -2.0 * dr};
}

}  // namespace detail

// Beam-splitter realization: ancilla in vacuum, projection on the one-photon
// state through <1| D(xi) |1> = exp(-|xi|^2/2)(1 - |xi|^2); the xi integral is
// a Gaussian moment, so the characteristic function stays closed-form.
class BsConditional {
public:
    BsConditional(const TwoModeBlocks& blocks, double tau) {
        const auto form = detail::bs_char_form(blocks, tau);
        const Eigen::Matrix2d bt = form.b + Eigen::Matrix2d::Identity();
        const Eigen::Matrix2d bti = bt.inverse();
        c0_ = 1.0 - bti.trace();
        q_ = form.c * bti * bti * form.c.transpose();
        s_ = form.a - form.c * bti * form.c.transpose();
        si_ = s_.inverse();
        width_ = std::sqrt(std::max(si_(0, 0), si_(1, 1)));
    }

    double raw(double dr, double di) const {
        const Eigen::Vector2d k = detail::k_of_delta(dr, di);
        const double quad = k.dot(si_ * q_ * si_ * k);
        return (2.0 / (M_PI * std::sqrt(s_.determinant()))) *
               (c0_ - (q_ * si_).trace() + quad) * std::exp(-0.5 * k.dot(si_ * k));
    }

    double total() const { return c0_; }

    double origin_normalized() const { return raw(0.0, 0.0) / c0_; }

    WignerGrid grid(GridSpec spec = {}) const {
        auto f = [this](double dr, double di) { return raw(dr, di); };
        return sample_wigner(f, spec, width_);
    }

private:
    double c0_ = 0.0;
    Eigen::Matrix2d q_, s_, si_;
    double width_ = 1.0;
};

inline WignerGrid wigner_bs(const TwoModeBlocks& blocks, double tau, GridSpec spec = {}) {
    return BsConditional(blocks, tau).grid(spec);
}

inline double wigner_bs_origin(const TwoModeBlocks& blocks, double tau) {
    return BsConditional(blocks, tau).origin_normalized();
}

// Finite-efficiency Geiger detector: the no-click POVM resums to a Gaussian,
// Xi(mu, eps) = chi(mu,0,0) - Phi(mu, eps) with
// Phi = (2 / (eps sqrt(det Bt))) exp(-mu^T S_eps mu / 2).
class InefficientConditional {
public:
    InefficientConditional(const TwoModeBlocks& blocks, double tau, double eps) : eps_(eps) {
        if (!(eps > 0.0 && eps <= 1.0))
            throw ArgumentError("inefficient detector: efficiency must lie in (0, 1]");
        const auto form = detail::bs_char_form(blocks, tau);
        a_ = form.a;
        ai_ = a_.inverse();
        const Eigen::Matrix2d bt =
            form.b + ((2.0 - eps) / eps) * Eigen::Matrix2d::Identity();
        phi_pref_ = 2.0 / (eps * std::sqrt(bt.determinant()));
        s_ = form.a - form.c * bt.inverse() * form.c.transpose();
        si_ = s_.inverse();
        width_ = std::sqrt(std::max({ai_(0, 0), ai_(1, 1), si_(0, 0), si_(1, 1)}));
    }

    // characteristic-domain perturbation term, for detector-effect metrics
    double phi(double mu_r, double mu_i) const {
        Eigen::Vector2d z(mu_r, mu_i);
        return phi_pref_ * std::exp(-0.5 * z.dot(s_ * z));
    }

    double raw(double dr, double di) const {
        const Eigen::Vector2d k = detail::k_of_delta(dr, di);
        const double t1 =
            std::exp(-0.5 * k.dot(ai_ * k)) / std::sqrt(a_.determinant());
        const double t2 = phi_pref_ * std::exp(-0.5 * k.dot(si_ * k)) /
                          std::sqrt(s_.determinant());
        return (2.0 / M_PI) * (t1 - t2);
    }

    double total() const { return 1.0 - phi_pref_; }

    double origin_normalized() const { return raw(0.0, 0.0) / total(); }

    WignerGrid grid(GridSpec spec = {}) const {
        auto f = [this](double dr, double di) { return raw(dr, di); };
        return sample_wigner(f, spec, width_);
    }

private:
    double eps_;
    Eigen::Matrix2d a_, ai_, s_, si_;
    double phi_pref_ = 0.0;
    double width_ = 1.0;
};

inline WignerGrid wigner_bs_inefficient(const TwoModeBlocks& blocks, double tau, double eps,
                                        GridSpec spec = {}) {
    return InefficientConditional(blocks, tau, eps).grid(spec);
}

// sup over the characteristic plane of |Phi(mu, 1) - Phi(mu, eps)|, the
// paper's measure of the detector-inefficiency perturbation.
inline double detector_perturbation(const TwoModeBlocks& blocks, double tau, double eps,
                                    double mu_max = 6.0, int n = 121) {
    InefficientConditional ideal(blocks, tau, 1.0), lossy(blocks, tau, eps);
    double sup = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double mr = -mu_max + 2.0 * mu_max * i / (n - 1);
            const double mi = -mu_max + 2.0 * mu_max * j / (n - 1);
            sup = std::max(sup, std::abs(ideal.phi(mr, mi) - lossy.phi(mr, mi)));
        }
    return sup;
}

}  // namespace optomech::subtract
