#pragma once

#include <cmath>

#include "optomech/spectra/dns.hpp"

namespace optomech::spectra {

struct EffectiveOscillator {
    double omega_eff = 0.0;       // rad/s
    double gamma_eff = 0.0;       // 1/s
    double probe_frequency = 0.0; // rad/s
    double detuning = 0.0;        // rad/s
    double mu_r = 0.0;            // rad^2/s^2
    double mu_i = 0.0;            // rad^2/s^2 (carries the omega factor)
};

// Effective frequency and damping from the real and imaginary parts of the
// mechanical susceptibility denominator. The quasi-static limit is evaluated
// at omega = 1e-6 * omega_m.
inline EffectiveOscillator effective_oscillator(const models::MechanicalParams& mech,
                                                const models::CavityParams& cavity,
                                                const std::optional<models::BecParams>& bec,
                                                const models::MeanFields& mf,
                                                double probe_omega) {
    ThreeModeSpectra sp(mech, cavity, bec, mf);
    const double w = (probe_omega == 0.0) ? 1e-6 * mech.omega_m : probe_omega;
    const std::complex<double> c = sp.susceptibility_correction(w);

    EffectiveOscillator eff;
    eff.probe_frequency = probe_omega;
    eff.detuning = mf.delta;
    eff.mu_r = c.real() / mech.mass;
    // gamma_eff = gamma - Im(c)/(m w) in the e^{+i w t} convention used by
    // the frequency solve; written as gamma + mu_i / w below.
    eff.mu_i = -c.imag() / mech.mass;
    const double w2 = mech.omega_m * mech.omega_m - eff.mu_r;
    if (w2 < 0.0)
        throw AccuracyError("effective_oscillator: omega_m^2 < mu_r, imaginary frequency");
    eff.omega_eff = std::sqrt(w2);
    eff.gamma_eff = mech.gamma + eff.mu_i / w;
    return eff;
}

}  // namespace optomech::spectra
