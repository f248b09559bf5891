#pragma once

#include <cmath>

#include "optomech/subtract/blocks.hpp"
#include "optomech/wigner_grid.hpp"

namespace optomech::subtract {

namespace detail {

// Polynomial factor of the conditional Wigner function. Orientation fixed
// against the Fock-basis oracle: delta_r pairs with the position variance
// m11, delta_i with m22, and the cross term enters with +8.
inline double poly_a(const TwoModeBlocks& b, double dr, double di) {
    const double r1 = b.r11 * b.r11 + b.r12 * b.r12;
    const double r2 = b.r22 * b.r22 + b.r21 * b.r21;
    const double cc = b.c11 + b.c22 - 2.0;
    return b.m11 * b.m11 * b.m22 * b.m22 * cc +
           b.m11 * b.m11 * (4.0 * di * di - b.m22) * r2 +
           b.m22 * b.m22 * (4.0 * dr * dr - b.m11) * r1 +
           8.0 * b.m11 * b.m22 * (b.r11 * b.r21 + b.r12 * b.r22) * dr * di;
}

// integral of poly_a times the Gaussian exp(-a dr^2 - b di^2)
inline double poly_a_gaussian_integral(const TwoModeBlocks& b, double a_coef, double b_coef) {
    const double r1 = b.r11 * b.r11 + b.r12 * b.r12;
    const double r2 = b.r22 * b.r22 + b.r21 * b.r21;
    const double cc = b.c11 + b.c22 - 2.0;
    const double alpha = b.m11 * b.m11 * b.m22 * b.m22 * cc - b.m11 * b.m11 * b.m22 * r2 -
                         b.m22 * b.m22 * b.m11 * r1;
    const double beta_r = b.m22 * b.m22 * r1;  // coefficient of 4 dr^2
    const double beta_i = b.m11 * b.m11 * r2;  // coefficient of 4 di^2
    return M_PI / std::sqrt(a_coef * b_coef) *
           (alpha + 2.0 * beta_r / a_coef + 2.0 * beta_i / b_coef);
}

}  // namespace detail

// Conditional mechanical Wigner function after ideal single-photon
// subtraction, sampled on a grid and renormalized; the raw prefactor follows
// the printed closed form.
inline WignerGrid wigner_formal(const TwoModeBlocks& blocks, GridSpec spec = {}) {
    if (blocks.m11 <= 0 || blocks.m22 <= 0 || blocks.m11 * blocks.m22 <= 0)
        throw PhysicalityError("wigner_formal: mechanical block determinant not positive");
    const double cc = blocks.c11 + blocks.c22 - 2.0;
    if (cc <= 0)
        throw PhysicalityError(
            "wigner_formal: field carries no excess quanta, conditioning is degenerate");
    const double det_m = blocks.m11 * blocks.m22;
    const double prefactor = 2.0 * M_PI / (std::pow(det_m, 2.5) * cc);
    auto f = [&](double dr, double di) {
        return prefactor * detail::poly_a(blocks, dr, di) *
               std::exp(-2.0 * (dr * dr / blocks.m11 + di * di / blocks.m22));
    };
    const double width = 0.5 * std::sqrt(std::max(blocks.m11, blocks.m22));
    return sample_wigner(f, spec, width);
}

// W(0,0) of the normalized conditional state, closed form (no grid).
inline double wigner_formal_origin(const TwoModeBlocks& blocks) {
    const double z = detail::poly_a_gaussian_integral(blocks, 2.0 / blocks.m11,
                                                      2.0 / blocks.m22);
    return detail::poly_a(blocks, 0.0, 0.0) / z;
}

struct NegativityCriterion {
    bool negative = false;
    bool squeezing_warning = false;  // some variance below vacuum: printed
                                     // inequality assumption violated
};

// Printed origin-negativity inequality, evaluated in the oracle-validated
// orientation; by construction it agrees with the sign of W(0,0).
inline NegativityCriterion negativity_criterion(const TwoModeBlocks& blocks) {
    NegativityCriterion out;
    out.squeezing_warning = !blocks.no_squeezing_below_vacuum();
    out.negative = detail::poly_a(blocks, 0.0, 0.0) < 0.0;
    return out;
}

// Origin value of the dissipating conditional state: convolution of the
// t = 0 Wigner function with a thermal Gaussian kernel of width N tau',
// tau' = 1 - exp(-2 gamma t), center scale exp(-gamma t).
inline std::vector<double> decay_negativity(const TwoModeBlocks& blocks, double gamma,
                                            double n_bar, const std::vector<double>& t_grid) {
    if (gamma <= 0) throw ArgumentError("decay_negativity: gamma must be positive");
    if (n_bar < 0) throw ArgumentError("decay_negativity: n_bar must be non-negative");
    const double big_n = 2.0 * n_bar + 1.0;
    const double a0 = 2.0 / blocks.m11, b0 = 2.0 / blocks.m22;
    const double z = detail::poly_a_gaussian_integral(blocks, a0, b0);
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < 0) throw ArgumentError("decay_negativity: negative time");
        if (t == 0.0) {
            out.push_back(detail::poly_a(blocks, 0.0, 0.0) / z);
            continue;
        }
        const double tau = -std::expm1(-2.0 * gamma * t);
        const double g = std::exp(-2.0 * gamma * t) / (big_n * tau);
        const double a = a0 + 2.0 * g, b = b0 + 2.0 * g;
        const double integral = detail::poly_a_gaussian_integral(blocks, a, b);
        out.push_back(2.0 / (M_PI * tau * big_n) * integral / z);
    }
    return out;
}

// Weights of the spin-mediated subtraction map, w_n = sin(G sqrt(n) t)/sqrt(n),
// and the worst-case deviation from the flat ideal over n = 1..n_max.
struct SubtractorWeights {
    std::vector<double> weights;
    double max_relative_deviation = 0.0;
};

inline SubtractorWeights atomic_subtractor_weights(double rabi, double t, int n_max) {
    if (n_max < 1) throw ArgumentError("atomic_subtractor_weights: n_max must be >= 1");
    SubtractorWeights out;
    const double gt = rabi * t;
    out.weights.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        const double sn = std::sqrt(static_cast<double>(n));
        out.weights.push_back(std::sin(gt * sn) / sn);
        if (gt != 0.0)
            out.max_relative_deviation = std::max(
                out.max_relative_deviation, std::abs(out.weights.back() / gt - 1.0));
    }
    return out;
}

}  // namespace optomech::subtract
