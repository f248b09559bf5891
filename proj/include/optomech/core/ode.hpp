#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <functional>
#include <sstream>
#include <vector>

#include "optomech/common.hpp"
#include "optomech/core/covariance.hpp"
#include "optomech/core/lyapunov.hpp"

namespace optomech {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double first_step = 0.0;  // 0 -> automatic
    double min_step_factor = 1e-12;
};

// Adaptive embedded Runge-Kutta pair (Dormand-Prince 5(4)).
// Calls observe(t, y) at every accepted step; integrates t0 -> t1.
inline Eigen::VectorXd integrate_rk45(
    const std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>& rhs,
    double t0, double t1, Eigen::VectorXd y, const OdeOptions& opt = {},
    const std::function<void(double, const Eigen::VectorXd&)>& observe = nullptr) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) return y;
    const double span = t1 - t0;
    const int n = static_cast<int>(y.size());
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    rhs(t0, y, k1);
    double h = opt.first_step > 0 ? opt.first_step : span / 100.0;
    double t = t0;
    const double hmin = std::abs(span) * opt.min_step_factor;

    while ((span > 0 && t < t1) || (span < 0 && t > t1)) {
        if ((span > 0 && t + h > t1) || (span < 0 && t + h < t1)) h = t1 - t;

        ytmp = y + h * a21 * k1;
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double errnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            errnorm = std::max(errnorm, std::abs(err(i)) / sc);
        }

        if (errnorm <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            if (observe) observe(t, y);
        }
        const double fac = errnorm > 0 ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (std::abs(h) < hmin && ((span > 0 && t < t1) || (span < 0 && t > t1))) {
            std::ostringstream msg;
            msg << "integrate_rk45: step size collapsed at t = " << t;
            throw IntegrationError(msg.str());
        }
    }
    return y;
}

namespace detail {
inline Eigen::VectorXd flatten_sym(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::VectorXd v(n * (n + 1) / 2);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) v(k++) = m(i, j);
    return v;
}

inline Eigen::MatrixXd unflatten_sym(const Eigen::VectorXd& v, int n) {
    Eigen::MatrixXd m(n, n);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m(i, j) = v(k);
            m(j, i) = v(k);
            ++k;
        }
    return m;
}
}  // namespace detail

// Exact stepping of Vdot = K V + V K^T + D for constant K: over a step h,
// V -> F V F^T + J with F = exp(K h) and J = int_0^h exp(Ks) D exp(K^T s) ds
// obtained from the (1,2) block of exp([[K, D], [0, -K^T]] h) (Van Loan).
// Handles arbitrary stiffness, so long-time steady-state limits are cheap.
inline std::vector<CovarianceMatrix> propagate_covariance_constant(
    const DriftMatrix& k, const DiffusionMatrix& d, const CovarianceMatrix& v0,
    const std::vector<double>& time_grid, bool check_physicality = true) {
    const int n = v0.dim();
    if (k.dim() != n || d.dim() != n)
        throw DimensionError("propagate_covariance_constant: dimension mismatch");
    for (size_t i = 1; i < time_grid.size(); ++i)
        if (time_grid[i] <= time_grid[i - 1])
            throw ArgumentError("propagate_covariance_constant: time grid must increase");
    std::vector<CovarianceMatrix> out;
    if (time_grid.empty()) return out;

    Eigen::MatrixXd v = v0.matrix();
    auto emit = [&](double when) {
        CovarianceMatrix cv(0.5 * (v + v.transpose()));
        if (check_physicality && !cv.is_physical(1e-6)) {
            std::ostringstream msg;
            msg << "propagate_covariance_constant: covariance unphysical at t = " << when;
            throw PhysicalityError(msg.str());
        }
        out.push_back(std::move(cv));
    };

    const double knorm = k.entries.cwiseAbs().maxCoeff();
    double t = time_grid.front();
    emit(t);
    double last_h = -1.0;
    Eigen::MatrixXd f, j;
    for (size_t i = 1; i < time_grid.size(); ++i) {
        const double h = time_grid[i] - t;
        if (h != last_h) {
            // keep the exponential argument moderate, then double the step:
            // (F, J) -> (F^2, F J F^T + J) preserves symmetry and positivity.
            int doublings = 0;
            double h0 = h;
            while (knorm * h0 > 16.0 && doublings < 60) {
                h0 *= 0.5;
                ++doublings;
            }
            Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * n, 2 * n);
            big.topLeftCorner(n, n) = k.entries * h0;
            big.topRightCorner(n, n) = d.entries * h0;
            big.bottomRightCorner(n, n) = -k.entries.transpose() * h0;
            const Eigen::MatrixXd e = big.exp();
            f = e.topLeftCorner(n, n);
            j = e.topRightCorner(n, n) * f.transpose();
            j = 0.5 * (j + j.transpose());
            for (int s = 0; s < doublings; ++s) {
                j = f * j * f.transpose() + j;
                j = 0.5 * (j + j.transpose());
                f = f * f;
            }
            last_h = h;
        }
        v = f * v * f.transpose() + j;
        t = time_grid[i];
        emit(t);
    }
    return out;
}

// Integrates Vdot = K(t) V + V K(t)^T + D from V0 through the given strictly
// increasing time grid; the state is kept symmetric by construction (only the
// upper triangle is integrated). Every returned matrix is checked to stay
// physical to min nu >= 1/2 - 1e-6.
inline std::vector<CovarianceMatrix> propagate_covariance(
    const std::function<Eigen::MatrixXd(double)>& k_of_t, const DiffusionMatrix& d,
    const CovarianceMatrix& v0, const std::vector<double>& time_grid,
    const OdeOptions& opt = {}, bool check_physicality = true) {
    const int n = v0.dim();
    if (d.dim() != n) throw DimensionError("propagate_covariance: dimension mismatch");
    for (size_t i = 1; i < time_grid.size(); ++i)
        if (time_grid[i] <= time_grid[i - 1])
            throw ArgumentError("propagate_covariance: time grid must be strictly increasing");
    if (time_grid.empty()) return {};
    if (check_physicality && !v0.is_physical(1e-6))
        throw PhysicalityError("propagate_covariance: initial covariance is unphysical");

    auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        const Eigen::MatrixXd v = detail::unflatten_sym(y, n);
        const Eigen::MatrixXd k = k_of_t(t);
        Eigen::MatrixXd kv = k * v;
        dy = detail::flatten_sym(kv + kv.transpose() + d.entries);
    };

    std::vector<CovarianceMatrix> out;
    out.reserve(time_grid.size());
    double t = time_grid.front();
    Eigen::VectorXd y = detail::flatten_sym(v0.matrix());
    auto emit = [&](double when, const Eigen::VectorXd& state) {
        CovarianceMatrix v(detail::unflatten_sym(state, n));
        if (check_physicality && !v.is_physical(1e-6)) {
            std::ostringstream msg;
            msg << "propagate_covariance: covariance unphysical at t = " << when
                << " (min nu = " << min_symplectic_eigenvalue(v) << ")";
            throw PhysicalityError(msg.str());
        }
        out.push_back(std::move(v));
    };

    if (time_grid.size() == 1 || time_grid.front() == time_grid.back()) {
        emit(t, y);
        return out;
    }
    emit(t, y);
    for (size_t i = 1; i < time_grid.size(); ++i) {
        y = integrate_rk45(rhs, t, time_grid[i], y, opt);
        t = time_grid[i];
        emit(t, y);
    }
    return out;
}

}  // namespace optomech
