#pragma once

#include <cmath>
#include <optional>

#include "optomech/common.hpp"

namespace optomech::models {

struct MechanicalParams {
    double omega_m = 0.0;      // rad/s
    double mass = 0.0;         // kg
    double gamma = 0.0;        // energy decay rate, 1/s
    double temperature = 0.0;  // K

    void validate() const {
        if (omega_m <= 0 || mass <= 0 || gamma <= 0 || temperature <= 0)
            throw ArgumentError("mechanical parameters must be strictly positive");
    }

    double n_bar() const { return thermal_occupation(omega_m, temperature); }
    double v_thermal() const { return 2.0 * n_bar() + 1.0; }
    // zero-point width sqrt(hbar / 2 m omega_m), meters
    double x_zpf() const { return std::sqrt(constants::hbar / (2.0 * mass * omega_m)); }
};

struct CavityParams {
    double length = 0.0;           // m
    double omega_c = 0.0;          // rad/s
    double finesse = 0.0;          // dimensionless
    double pump_power = 0.0;       // W
    double pump_wavelength = 0.0;  // m; 0 -> pump at omega_c
    // Single-photon optomechanical rate g0 = chi * x_zpf; when absent it is
    // derived from the geometric coupling chi = omega_c / length.
    std::optional<double> coupling_rate;

    void validate() const {
        if (length <= 0 || omega_c <= 0 || finesse <= 0 || pump_power < 0)
            throw ArgumentError("cavity parameters must be positive");
    }

    double kappa() const { return M_PI * constants::c_light / (2.0 * length * finesse); }
    double omega_laser() const {
        return pump_wavelength > 0 ? 2.0 * M_PI * constants::c_light / pump_wavelength : omega_c;
    }
    double eta() const {
        return std::sqrt(2.0 * kappa() * pump_power / (constants::hbar * omega_laser()));
    }
    // geometric radiation-pressure coefficient, rad/(s m)
    double chi() const { return omega_c / length; }
    double g0(const MechanicalParams& mech) const {
        return coupling_rate ? *coupling_rate : chi() * mech.x_zpf();
    }
};

struct BogoliubovInputs {
    double epsilon_k = 0.0;  // free-particle energy at 2 k_c, rad/s units (E/hbar)
    double n0_gB = 0.0;      // condensate density times 1D interaction, rad/s units
};

struct BecParams {
    double omega_b = 0.0;  // Bogoliubov frequency (omega tilde), rad/s
    double zeta = 0.0;     // cavity-Bogoliubov coupling, rad/s
    double n_atoms = 0.0;  // N0
    std::optional<double> u0;  // g^2 / Delta_a, rad/s
    std::optional<BogoliubovInputs> bogoliubov_inputs;

    void validate() const {
        if (omega_b <= 0) throw ArgumentError("Bogoliubov frequency must be positive");
        if (zeta < 0) throw ArgumentError("cavity-Bogoliubov coupling must be non-negative");
    }

    // Condensate frequency pull g^2 N0 / (2 Delta_a) = u0 N0 / 2.
    double frequency_pull() const { return u0 ? (*u0 * n_atoms / 2.0) : 0.0; }
};

// zeta = U0 sqrt(2 N0)/4 (alpha_{2kc} - beta_{2kc}) with the Bogoliubov
// amplitudes from E_k = sqrt(2 eps_k n0 g_B + eps_k^2).
inline double bogoliubov_coupling(double u0, double n_atoms, double epsilon_k, double n0_gB) {
    if (u0 < 0 || n_atoms < 0 || epsilon_k <= 0 || n0_gB < 0)
        throw ArgumentError("bogoliubov_coupling: inputs must be non-negative, epsilon_k > 0");
    const double ek = std::sqrt(2.0 * epsilon_k * n0_gB + epsilon_k * epsilon_k);
    const double base = (epsilon_k + n0_gB) / ek;
    const double alpha = std::sqrt(0.5 * (base + 1.0));
    const double beta = std::sqrt(0.5 * (base - 1.0));
    return u0 * std::sqrt(2.0 * n_atoms) / 4.0 * (alpha - beta);
}

}  // namespace optomech::models
