#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "optomech/common.hpp"
#include "optomech/models/params.hpp"

namespace optomech::models {

enum class Branch { monostable, bistable_low, bistable_high };

struct MeanFields {
    double delta = 0.0;    // total detuning, rad/s
    double alpha_s = 0.0;  // intracavity field amplitude, dimensionless
    double q_s = 0.0;      // static mirror displacement, m
    double big_q_s = 0.0;  // static Bogoliubov displacement, dimensionless
    Branch branch = Branch::monostable;
    double delta_bare = 0.0;  // laser detuning including the condensate pull
};

// How the detuning is specified: the total (self-consistent) Delta directly,
// or the bare laser detuning omega_C - omega_L (the condensate pull, when a
// BEC is present, is added internally).
struct DetuningSpec {
    enum class Kind { total, bare } kind = Kind::total;
    double value = 0.0;  // rad/s

    static DetuningSpec total(double v) { return {Kind::total, v}; }
    static DetuningSpec bare(double v) { return {Kind::bare, v}; }
};

namespace detail {
// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 via the companion matrix of the
// normalized cubic, polished with Newton steps.
inline std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
    std::vector<std::complex<double>> roots;
    if (std::abs(c3) < 1e-300 * std::max({std::abs(c2), std::abs(c1), std::abs(c0)})) {
        // quadratic
        if (c2 == 0.0) {
            if (c1 != 0.0) roots.push_back(-c0 / c1);
        } else {
            const std::complex<double> disc = std::complex<double>(c1 * c1 - 4 * c2 * c0, 0);
            const std::complex<double> s = std::sqrt(disc);
            roots.push_back((-c1 + s) / (2 * c2));
            roots.push_back((-c1 - s) / (2 * c2));
        }
    } else {
        const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
        // depressed cubic t^3 + p t + q, x = t - a/3
        const double p = b - a * a / 3.0;
        const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        const std::complex<double> disc = std::complex<double>(q * q / 4.0 + p * p * p / 27.0, 0);
        const std::complex<double> sq = std::sqrt(disc);
        std::complex<double> u = -q / 2.0 + sq;
        // principal cube root; pick the better-conditioned branch
        if (std::abs(u) < 1e-30) u = -q / 2.0 - sq;
        const std::complex<double> upow = std::pow(u, 1.0 / 3.0);
        const std::complex<double> w(-0.5, std::sqrt(3.0) / 2.0);
        for (int k = 0; k < 3; ++k) {
            std::complex<double> uk = upow * std::pow(w, k);
            std::complex<double> t = (std::abs(uk) > 1e-30) ? uk - p / (3.0 * uk)
                                                            : std::complex<double>(0, 0);
            roots.push_back(t - a / 3.0);
        }
    }
    std::vector<double> out;
    for (auto z : roots) {
        if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z.real()))) continue;
        double x = z.real();
        for (int it = 0; it < 50; ++it) {  // Newton polish
            const double f = ((c3 * x + c2) * x + c1) * x + c0;
            const double df = (3 * c3 * x + 2 * c2) * x + c1;
            if (df == 0.0) break;
            const double dx = f / df;
            x -= dx;
            if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        bool dup = false;
        for (double r : out)
            if (std::abs(r - x) <= 1e-9 * std::max(1.0, std::abs(x))) dup = true;
        if (!dup) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace detail

// Stationary values of the coupled classical equations,
//   Delta = Delta0 - chi q_s + sqrt(2) zeta Q_s,   alpha_s = eta / sqrt(Delta^2 + kappa^2),
// reduced to a cubic in u = alpha_s^2. The branch continuously connected to
// the zero-power solution is returned unless bistable_high is requested.
inline MeanFields mean_fields(const MechanicalParams& mech, const CavityParams& cavity,
                              const std::optional<BecParams>& bec, const DetuningSpec& detuning,
                              Branch prefer = Branch::bistable_low) {
    mech.validate();
    cavity.validate();
    if (bec) bec->validate();

    const double kappa = cavity.kappa();
    const double eta = cavity.eta();
    const double g0 = cavity.g0(mech);
    const double zeta = bec ? bec->zeta : 0.0;
    const double omega_b = bec ? bec->omega_b : 1.0;
    const double pull = bec ? bec->frequency_pull() : 0.0;

    const double c_m = 2.0 * g0 * g0 / mech.omega_m;       // chi * q_s = c_m * alpha_s^2
    const double c_a = bec ? 2.0 * zeta * zeta / omega_b : 0.0;
    const double shift = c_m + c_a;

    MeanFields mf;
    auto finish = [&](double delta, double u, Branch br) {
        mf.delta = delta;
        mf.alpha_s = std::sqrt(std::max(u, 0.0));
        const double chi_eff = g0 / mech.x_zpf();
        mf.q_s = (chi_eff > 0) ? c_m * u / chi_eff : 0.0;
        mf.big_q_s = bec ? -std::sqrt(2.0) * zeta * u / omega_b : 0.0;
        mf.branch = br;
        mf.delta_bare = delta + shift * u - pull;
        return mf;
    };

    if (detuning.kind == DetuningSpec::Kind::total) {
        const double delta = detuning.value;
        const double u = eta * eta / (delta * delta + kappa * kappa);
        return finish(delta, u, Branch::monostable);
    }

    const double delta0 = detuning.value + pull;
    if (eta == 0.0) return finish(delta0, 0.0, Branch::monostable);
    if (shift == 0.0) {
        const double u = eta * eta / (delta0 * delta0 + kappa * kappa);
        return finish(delta0, u, Branch::monostable);
    }

    // u [ (Delta0 - shift*u)^2 + kappa^2 ] = eta^2
    const double c3 = shift * shift;
    const double c2 = -2.0 * delta0 * shift;
    const double c1 = delta0 * delta0 + kappa * kappa;
    const double c0 = -eta * eta;
    std::vector<double> roots = detail::cubic_real_roots(c3, c2, c1, c0);
    std::vector<double> positive;
    for (double r : roots)
        if (r > 0) positive.push_back(r);
    if (positive.empty())
        throw ConvergenceError("mean_fields: no positive real solution of the cubic");

    const bool bistable = positive.size() > 1;
    double u;
    Branch br;
    if (!bistable) {
        u = positive.front();
        br = Branch::monostable;
    } else if (prefer == Branch::bistable_high) {
        u = positive.back();
        br = Branch::bistable_high;
    } else {
        u = positive.front();
        br = Branch::bistable_low;
    }
    const double delta = delta0 - shift * u;

    // residual guard on both defining relations
    const double r1 = std::abs(u * (delta * delta + kappa * kappa) - eta * eta) /
                      std::max(eta * eta, 1e-300);
    if (r1 > 1e-10) throw ConvergenceError("mean_fields: residual of the cubic exceeds 1e-10");
    return finish(delta, u, br);
}

}  // namespace optomech::models
