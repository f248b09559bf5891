#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace optomech {

// CODATA 2018 values, SI units.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double c_light = 2.99792458e8;   // m/s
inline constexpr double mu_bohr = 9.2740100783e-24;  // J/T
}  // namespace constants

// Mean thermal occupation of a mode at angular frequency omega (rad/s) and
// temperature T (K), exact Bose factor.
inline double thermal_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
    if (x > 700.0) return 0.0;
    return 1.0 / (std::expm1(x));
}

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhysicalityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CutoffError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace optomech
