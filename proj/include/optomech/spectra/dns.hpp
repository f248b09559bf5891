#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optomech/common.hpp"
#include "optomech/core/lyapunov.hpp"
#include "optomech/models/mean_fields.hpp"
#include "optomech/models/system_model.hpp"

namespace optomech::spectra {

struct SpectrumCurve {
    std::vector<double> frequencies;  // rad/s
    std::vector<double> values;       // m^2 s (mechanical) or s (atomic)
    std::map<std::string, double> metadata;
};

// w * coth(beta * w), stable at w -> 0 (limit 1/beta).
inline double w_coth(double beta, double w) {
    const double x = beta * std::abs(w);
    if (x < 1e-6) return (1.0 + x * x / 3.0) / beta;
    return std::abs(w) / std::tanh(x);
}

// Frequency-domain model of the driven three-mode system. All closed forms
// and the generic matrix solve share one parameter snapshot; the two routes
// are required to agree pointwise.
class ThreeModeSpectra {
public:
    ThreeModeSpectra(const models::MechanicalParams& mech, const models::CavityParams& cavity,
                     const std::optional<models::BecParams>& bec, const models::MeanFields& mf)
        : mech_(mech), cavity_(cavity), bec_(bec), mf_(mf) {
        if (bec_) {
            model_ = models::build_three_mode(mech_, cavity_, *bec_, mf_);
        } else {
            models::BecParams free_bec;
            free_bec.omega_b = mech.omega_m;
            free_bec.zeta = 0.0;
            model_ = models::build_three_mode(mech_, cavity_, free_bec, mf_);
        }
        kappa_ = cavity.kappa();
        chi_ = cavity_.coupling_rate ? (*cavity_.coupling_rate / mech_.x_zpf()) : cavity_.chi();
        zeta_ = bec_ ? bec_->zeta : 0.0;
        omega_b_ = bec_ ? bec_->omega_b : mech.omega_m;
        beta_b_ = constants::hbar / (2.0 * constants::k_boltzmann * mech_.temperature);
        check_stability();
    }

    const models::SystemModel& model() const { return model_; }
    double kappa() const { return kappa_; }
    double delta() const { return mf_.delta; }

    // phi(w) = 4 Delta alpha^2 zeta^2 wb + [Delta^2 + (kappa + i w)^2](w^2 - wb^2)
    std::complex<double> phi(double w) const {
        const std::complex<double> s(kappa_, w);
        const double wb2 = omega_b_ * omega_b_;
        return (delta() * delta() + s * s) * (w * w - wb2) +
               4.0 * delta() * mf_.alpha_s * mf_.alpha_s * zeta_ * zeta_ * omega_b_;
    }

    // cavity-mediated correction to the mechanical susceptibility denominator;
    // the (w^2 - wb^2) factor cancels analytically when zeta alpha_s = 0.
    std::complex<double> susceptibility_correction(double w) const {
        const double pre = 2.0 * constants::hbar * delta() * mf_.alpha_s * mf_.alpha_s * chi_ *
                           chi_;
        const std::complex<double> s(kappa_, w);
        if (zeta_ * mf_.alpha_s == 0.0) return pre / (delta() * delta() + s * s);
        return pre * (w * w - omega_b_ * omega_b_) / phi(w);
    }

    // d_M(w)/phi(w) = -[m(wm^2 - w^2 + i gamma w) - correction]
    std::complex<double> denominator(double w) const {
        const double m = mech_.mass, wm = mech_.omega_m;
        return m * std::complex<double>(wm * wm - w * w, mech_.gamma * w) -
               susceptibility_correction(w);
    }

    double s_thermal(double w) const {
        return constants::hbar * mech_.gamma * mech_.mass * w_coth(beta_b_, w);
    }

    // Radiation-pressure input term 2 kappa hbar^2 alpha^2 chi^2
    // (Delta^2+kappa^2+w^2) / |Delta^2 + (kappa - i w)^2|^2.
    double s_radiation_pressure(double w) const {
        const double num = 2.0 * kappa_ * constants::hbar * constants::hbar * mf_.alpha_s *
                           mf_.alpha_s * chi_ * chi_ *
                           (delta() * delta() + kappa_ * kappa_ + w * w);
        const double a = delta() * delta() + kappa_ * kappa_ - w * w;
        const double b = 2.0 * kappa_ * w;
        return num / (a * a + b * b);
    }

    // Closed-form mechanical DNS assembled from the printed pieces phi, d_M,
    // S_rp, S_th; the radiation-pressure term carries the Bogoliubov response
    // factor (w^2 - wb^2)^2 |Delta^2 + (kappa - i w)^2|^2 / |phi|^2 that the
    // frequency-domain solution of the Langevin system produces.
    double sq_closed_form(double w) const {
        const std::complex<double> den = denominator(w);
        const double den2 = std::norm(den);
        double rp = s_radiation_pressure(w);
        if (zeta_ * mf_.alpha_s != 0.0) {
            const double wb2 = omega_b_ * omega_b_;
            const double a = delta() * delta() + kappa_ * kappa_ - w * w;
            const double b = 2.0 * kappa_ * w;
            const double resp = (w * w - wb2) * (w * w - wb2) * (a * a + b * b) /
                                std::norm(phi(w));
            rp *= resp;
        }
        return (s_thermal(w) + rp) / den2;
    }

    // Generic frequency-domain route: delta phi(w) = -(K - i w I)^{-1} N(w)
    // on the dimensionless canonical system, symmetrized over +-w.
    double sq_generic(double w) const {
        const double sq_dimless = generic_spectrum(w, 0);
        return sq_dimless * constants::hbar / (mech_.mass * mech_.omega_m);
    }

    double s_atomic(double w) const {
        if (model_.constants.g_atom == 0.0) return 0.0;
        return generic_spectrum(w, 4);
    }

private:
    void check_stability() const {
        Eigen::MatrixXd k = model_.drift.entries;
        if (model_.constants.g_atom == 0.0) k = k.topLeftCorner(4, 4);
        if (!is_stable(DriftMatrix(k)))
            throw StabilityError("spectra: model is unstable at this detuning");
    }

    // Unsymmetrized noise density matrix in canonical order (q,p,x,y,Q,P).
    Eigen::MatrixXcd noise_density(double w) const {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(6, 6);
        const double x = beta_b_ * w;
        double one_plus_coth;  // w [1 + coth(beta w)] / wm, stable near 0
        if (std::abs(x) < 1e-6)
            one_plus_coth = (w + (1.0 + x * x / 3.0) / beta_b_) / mech_.omega_m;
        else
            one_plus_coth = w * (1.0 + 1.0 / std::tanh(x)) / mech_.omega_m;
        c(1, 1) = mech_.gamma * one_plus_coth;
        c(2, 2) = kappa_;
        c(3, 3) = kappa_;
        c(2, 3) = std::complex<double>(0, kappa_);
        c(3, 2) = std::complex<double>(0, -kappa_);
        return c;
    }

    double generic_spectrum(double w, int index) const {
        const Eigen::MatrixXd& k = model_.drift.entries;
        auto response = [&](double omega) {
            Eigen::MatrixXcd a =
                k.cast<std::complex<double>>() -
                std::complex<double>(0, omega) * Eigen::MatrixXcd::Identity(6, 6);
            return (-a.inverse()).eval();
        };
        const Eigen::MatrixXcd rp = response(w);
        const Eigen::MatrixXcd rm = response(-w);
        const std::complex<double> p1 =
            (rp * noise_density(w) * rm.transpose())(index, index);
        const std::complex<double> p2 =
            (rm * noise_density(-w) * rp.transpose())(index, index);
        return 0.5 * (p1 + p2).real();
    }

    models::MechanicalParams mech_;
    models::CavityParams cavity_;
    std::optional<models::BecParams> bec_;
    models::MeanFields mf_;
    models::SystemModel model_;
    double kappa_ = 0, chi_ = 0, zeta_ = 0, omega_b_ = 0, beta_b_ = 0;
};

inline SpectrumCurve dns_mechanical(const models::MechanicalParams& mech,
                                    const models::CavityParams& cavity,
                                    const std::optional<models::BecParams>& bec,
                                    const models::MeanFields& mf,
                                    const std::vector<double>& omega_grid) {
    ThreeModeSpectra sp(mech, cavity, bec, mf);
    SpectrumCurve curve;
    curve.frequencies = omega_grid;
    curve.values.reserve(omega_grid.size());
    for (double w : omega_grid) curve.values.push_back(sp.sq_closed_form(w));
    curve.metadata = {{"delta", mf.delta},
                      {"kappa", cavity.kappa()},
                      {"omega_m", mech.omega_m},
                      {"alpha_s", mf.alpha_s},
                      {"temperature", mech.temperature}};
    return curve;
}

inline SpectrumCurve dns_atomic(const models::MechanicalParams& mech,
                                const models::CavityParams& cavity,
                                const models::BecParams& bec, const models::MeanFields& mf,
                                const std::vector<double>& omega_grid) {
    ThreeModeSpectra sp(mech, cavity, bec, mf);
    SpectrumCurve curve;
    curve.frequencies = omega_grid;
    curve.values.reserve(omega_grid.size());
    for (double w : omega_grid) curve.values.push_back(sp.s_atomic(w));
    curve.metadata = {{"delta", mf.delta},
                      {"kappa", cavity.kappa()},
                      {"omega_b", bec.omega_b},
                      {"zeta", bec.zeta}};
    return curve;
}

}  // namespace optomech::spectra
