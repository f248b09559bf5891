#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "optomech/spectra/dns.hpp"
#include "optomech/spectra/effective.hpp"

namespace optomech::spectra {

struct EffectiveTemperature {
    double value = 0.0;       // K
    double error = 0.0;       // estimated quadrature error, K
    double variance_q = 0.0;  // <dq^2>, m^2
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol) return left + right;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate_panel(const std::function<double(double)>& f, double a, double b,
                              double tol, int depth = 48) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace detail

// T_eff = m omega_m^2 <dq^2> / k_B with <dq^2> = (1/pi) int_0^inf S_q dw,
// S_p = m^2 omega_m^2 S_q. Integration on [0, 20 omega_m] with panel
// breakpoints at the mechanical and Bogoliubov resonances plus a power-law
// tail estimate.
inline EffectiveTemperature effective_temperature(const models::MechanicalParams& mech,
                                                  const models::CavityParams& cavity,
                                                  const std::optional<models::BecParams>& bec,
                                                  const models::MeanFields& mf,
                                                  double cutoff_factor = 20.0) {
    ThreeModeSpectra sp(mech, cavity, bec, mf);
    auto f = [&](double w) { return sp.sq_closed_form(w); };

    // resonance locations and widths for panel seeding
    double w_eff = mech.omega_m, g_eff = mech.gamma;
    try {
        auto eff = effective_oscillator(mech, cavity, bec, mf, mech.omega_m);
        w_eff = eff.omega_eff;
        g_eff = std::max(eff.gamma_eff, mech.gamma);
    } catch (const AccuracyError&) {
    }
    const double wb = bec ? bec->omega_b : mech.omega_m;
    const double cutoff = cutoff_factor * mech.omega_m;

    std::vector<double> pts{0.0, cutoff};
    auto add_peak = [&](double w0, double width) {
        for (double span : {3.0, 30.0, 300.0}) {
            const double lo = w0 - span * width, hi = w0 + span * width;
            if (lo > 0 && lo < cutoff) pts.push_back(lo);
            if (hi > 0 && hi < cutoff) pts.push_back(hi);
        }
        if (w0 > 0 && w0 < cutoff) pts.push_back(w0);
    };
    add_peak(w_eff, std::max(g_eff, 1e-9 * mech.omega_m));
    add_peak(wb, std::max(g_eff, 1e-9 * mech.omega_m));
    pts.push_back(0.5 * mech.omega_m);
    pts.push_back(2.0 * mech.omega_m);
    pts.push_back(5.0 * mech.omega_m);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // crude scale to set absolute tolerances
    double scale = 0.0;
    for (double w : pts) scale = std::max(scale, f(w) * std::max(w, 0.01 * mech.omega_m));
    if (scale <= 0.0) throw AccuracyError("effective_temperature: spectrum vanished");

    double integral = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        integral += detail::integrate_panel(f, pts[i], pts[i + 1], 1e-7 * scale);

    // power-law tail beyond the cutoff
    const double s1 = f(cutoff), s2 = f(0.5 * cutoff);
    double tail = 0.0;
    if (s1 > 0 && s2 > 0) {
        double p = std::log(s2 / s1) / std::log(2.0);
        p = std::clamp(p, 1.5, 6.0);
        tail = s1 * cutoff / (p - 1.0);
    }
    const double var_q = (integral + tail) / M_PI;

    EffectiveTemperature out;
    out.variance_q = var_q;
    out.value = mech.mass * mech.omega_m * mech.omega_m * var_q / constants::k_boltzmann;
    out.error = (1e-5 * integral + tail) / M_PI * mech.mass * mech.omega_m * mech.omega_m /
                constants::k_boltzmann;
    if (tail > 0.05 * integral)
        throw AccuracyError("effective_temperature: tail beyond cutoff exceeds error budget");
    return out;
}

}  // namespace optomech::spectra
