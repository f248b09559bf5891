#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "optomech/entanglement/logneg.hpp"

namespace optomech::ent {

struct TripartiteReport {
    // one-vs-two log-negativities in the fixed order E_{A|MC}, E_{M|AC}, E_{C|AM}
    // for canonical mode order (M, C, A): A = mode 2, M = mode 0, C = mode 1.
    double e_a_mc = 0.0;
    double e_m_ac = 0.0;
    double e_c_am = 0.0;
    bool genuine = false;
    std::optional<double> g_tri;  // upper bound from the restart minimizer
    bool g_tri_is_upper_bound = true;
};

namespace detail {

// Orthogonal-symplectic from a planar rotation per mode plus mode mixing is
// not general enough; build a random symplectic via the Euler decomposition
// S = O1 Z O2 with O passive (from a random unitary) and Z diagonal squeezers.
inline Eigen::MatrixXd passive_symplectic(const Eigen::MatrixXcd& u) {
    const int n = static_cast<int>(u.rows());
    Eigen::MatrixXd s(2 * n, 2 * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double x = u(a, b).real(), y = u(a, b).imag();
            s(2 * a, 2 * b) = x;
            s(2 * a, 2 * b + 1) = -y;
            s(2 * a + 1, 2 * b) = y;
            s(2 * a + 1, 2 * b + 1) = x;
        }
    return s;
}

inline Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases =
        (std::complex<double>(0, 1) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Williamson decomposition sigma = S diag(nu_1,nu_1,...) S^T with S
// symplectic; S is the natural anchor for pure states below sigma, since
// sigma - 0.5 S S^T >= 0 always holds.
inline Eigen::MatrixXd williamson_symplectic(const Eigen::MatrixXd& sigma) {
    const int dim = static_cast<int>(sigma.rows());
    const int n = dim / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    const Eigen::MatrixXd root = es.operatorSqrt();
    const Eigen::MatrixXd b = root * symplectic_form(n) * root;  // antisymmetric
    Eigen::RealSchur<Eigen::MatrixXd> schur(b);
    Eigen::MatrixXd u = schur.matrixU();
    Eigen::MatrixXd t = schur.matrixT();
    Eigen::VectorXd dinv(dim);
    for (int i = 0; i < n; ++i) {
        double off = t(2 * i, 2 * i + 1);
        if (off < 0) {
            u.col(2 * i).swap(u.col(2 * i + 1));
            off = -off;
        }
        const double nu = std::max(off, 1e-300);
        dinv(2 * i) = 1.0 / std::sqrt(nu);
        dinv(2 * i + 1) = dinv(2 * i);
    }
    return root * u * dinv.asDiagonal();
}

// Pure-state covariance 0.5 * S S^T from 2 n^2 + n Euler parameters.
inline Eigen::MatrixXd pure_covariance(int n, const Eigen::VectorXd& params) {
    // parameters: two unitaries (n^2 angles each, through a Cayley-like map)
    // and n squeezing values. A compact parametrization: build Hermitian
    // generators from the parameter blocks and exponentiate.
    int off = 0;
    auto hermitian_from = [&](int count_off) {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
        int k = count_off;
        for (int i = 0; i < n; ++i) h(i, i) = params(k++);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                h(i, j) = std::complex<double>(params(k), params(k + 1));
                h(j, i) = std::conj(h(i, j));
                k += 2;
            }
        return h;
    };
    const int nun = n * n;
    Eigen::MatrixXcd u1 = unitary_exp(hermitian_from(0));
    Eigen::MatrixXcd u2 = unitary_exp(hermitian_from(nun));
    off = 2 * nun;
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        z(2 * i, 2 * i) = std::exp(params(off + i));
        z(2 * i + 1, 2 * i + 1) = std::exp(-params(off + i));
    }
    const Eigen::MatrixXd s = passive_symplectic(u1) * z * passive_symplectic(u2);
    return 0.5 * s * s.transpose();
}

inline double squared_logneg_pure(const Eigen::MatrixXd& vp, const std::vector<int>& side_b,
                                  int n_modes) {
    CovarianceMatrix v(vp);
    const double nu = min_symplectic_eigenvalue(partial_transpose(v, side_b));
    const double e = std::max(0.0, -std::log(2.0 * nu));
    return e * e;
}

// Nelder-Mead minimization, bounded iterations, deterministic.
template <typename F>
Eigen::VectorXd nelder_mead(F&& f, Eigen::VectorXd x0, double step, int max_iter,
                            double* best_out = nullptr) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i) simplex[i + 1](i) += step;
    for (int i = 0; i <= n; ++i) fv[i] = f(simplex[i]);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<int> order(n + 1);
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::vector<Eigen::VectorXd> snew(n + 1);
        std::vector<double> fnew(n + 1);
        for (int i = 0; i <= n; ++i) {
            snew[i] = simplex[order[i]];
            fnew[i] = fv[order[i]];
        }
        simplex.swap(snew);
        fv.swap(fnew);
        if (std::abs(fv[n] - fv[0]) <= 1e-12 * (1.0 + std::abs(fv[0]))) break;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i];
        centroid /= n;
        Eigen::VectorXd xr = centroid + (centroid - simplex[n]);
        const double fr = f(xr);
        if (fr < fv[0]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[n]);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            Eigen::VectorXd xc = centroid + 0.5 * (simplex[n] - centroid);
            const double fc = f(xc);
            if (fc < fv[n]) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    if (best_out) *best_out = fv[best];
    return simplex[best];
}

// Convex-roof G(sigma) = inf_{sigma_p <= sigma} E(sigma_p)^2 over pure
// Gaussian covariances, by penalized multi-start local search. Returns an
// upper bound on the infimum.
inline double contangle_upper_bound(const CovarianceMatrix& sigma, const std::vector<int>& side_b,
                                    int restarts, uint64_t seed, bool* converged) {
    const int n = sigma.n_modes();
    const int npar = 2 * n * n + n;
    const Eigen::MatrixXd vs = sigma.matrix();
    const Eigen::MatrixXd anchor = williamson_symplectic(vs);
    const double scale = vs.cwiseAbs().maxCoeff();
    auto candidate = [&](const Eigen::VectorXd& p) {
        // params = 0 reproduces the Williamson pure part, which is feasible
        const Eigen::MatrixXd inner = pure_covariance(n, p);
        return (anchor * (2.0 * inner) * anchor.transpose() * 0.5).eval();
    };
    auto objective = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd vp = candidate(p);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vs - vp);
        const double viol = std::max(0.0, -es.eigenvalues().minCoeff()) / scale;
        return squared_logneg_pure(vp, side_b, n) + 1e4 * viol * viol / (1e-4 + viol);
    };
    double best = std::numeric_limits<double>::infinity();
    bool ok = false;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed + 1000003ull * static_cast<uint64_t>(r));
        std::normal_distribution<double> gauss(0.0, 0.15);
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(npar);
        if (r > 0)
            for (int i = 0; i < npar; ++i) x0(i) = gauss(rng);
        double val = 0.0;
        Eigen::VectorXd xb = nelder_mead(objective, x0, 0.08, 2000, &val);
        // accept only feasible endpoints
        Eigen::MatrixXd vp = candidate(xb);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vs - vp);
        if (es.eigenvalues().minCoeff() >= -1e-7 * scale) {
            best = std::min(best, squared_logneg_pure(vp, side_b, n));
            ok = true;
        }
    }
    if (converged) *converged = ok;
    return best;
}

}  // namespace detail

// A <-> M exchange combined with the sign flip of the atomic quadratures that
// leaves the symmetric-coupling drift invariant (a local symplectic, so all
// entanglement quantities are unaffected).
inline Eigen::MatrixXd am_swap_matrix() {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(6, 6);
    t(0, 4) = -1;
    t(1, 5) = -1;
    t(2, 2) = 1;
    t(3, 3) = 1;
    t(4, 0) = -1;
    t(5, 1) = -1;
    return t;
}

inline double am_asymmetry(const CovarianceMatrix& v) {
    const Eigen::MatrixXd t = am_swap_matrix();
    const Eigen::MatrixXd sw = t * v.matrix() * t.transpose();
    return (sw - v.matrix()).cwiseAbs().maxCoeff() /
           std::max(1.0, v.matrix().cwiseAbs().maxCoeff());
}

// Project onto the A-M symmetric subspace; the average of two physical
// covariances stays physical.
inline CovarianceMatrix symmetrize_am(const CovarianceMatrix& v) {
    const Eigen::MatrixXd t = am_swap_matrix();
    return CovarianceMatrix(0.5 * (v.matrix() + t * v.matrix() * t.transpose()));
}

// Canonical mode roles in the three-mode state: 0 = M, 1 = C, 2 = A.
inline TripartiteReport tripartite_report(const CovarianceMatrix& v, bool compute_g_tri,
                                          int restarts = 20, uint64_t seed = 12345,
                                          double symmetry_tol = 1e-6) {
    if (v.n_modes() != 3) throw DimensionError("tripartite_report: needs a 3-mode state");
    if (!v.is_physical(1e-6))
        throw PhysicalityError("tripartite_report: covariance matrix is unphysical");

    TripartiteReport rep;
    rep.e_a_mc = log_negativity(v, {{0, 1}, {2}});
    rep.e_m_ac = log_negativity(v, {{1, 2}, {0}});
    rep.e_c_am = log_negativity(v, {{0, 2}, {1}});
    rep.genuine = rep.e_a_mc > 0 && rep.e_m_ac > 0 && rep.e_c_am > 0;

    if (!compute_g_tri) return rep;

    if (am_asymmetry(v) > symmetry_tol)
        throw ArgumentError("tripartite_report: g_tri requires A-M permutation symmetry");

    if (!rep.genuine) {
        rep.g_tri = 0.0;
        return rep;
    }

    // G_tri = min over focus choices of G_{i|jk} - G_{i|j} - G_{i|k};
    // ties resolve to the first of the order (C, M, A).
    const std::array<std::array<int, 3>, 3> focus = {{{1, 0, 2}, {0, 1, 2}, {2, 0, 1}}};
    double gmin = std::numeric_limits<double>::infinity();
    bool all_ok = true;
    for (const auto& f : focus) {
        bool ok1 = false, ok2 = false, ok3 = false;
        const double g_one_two =
            detail::contangle_upper_bound(v, {f[0]}, restarts, seed, &ok1);
        const double g_ij = detail::contangle_upper_bound(reduce(v, {std::min(f[0], f[1]),
                                                                     std::max(f[0], f[1])}),
                                                          {f[0] < f[1] ? 0 : 1}, restarts,
                                                          seed + 7, &ok2);
        const double g_ik = detail::contangle_upper_bound(reduce(v, {std::min(f[0], f[2]),
                                                                     std::max(f[0], f[2])}),
                                                          {f[0] < f[2] ? 0 : 1}, restarts,
                                                          seed + 13, &ok3);
        all_ok = all_ok && ok1 && ok2 && ok3;
        gmin = std::min(gmin, g_one_two - g_ij - g_ik);
    }
    if (!all_ok)
        throw ConvergenceError("tripartite_report: contangle minimizer failed, best bound " +
                               std::to_string(gmin));
    rep.g_tri = std::max(0.0, gmin);
    return rep;
}

}  // namespace optomech::ent
