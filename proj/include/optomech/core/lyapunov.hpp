#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <sstream>

#include "optomech/common.hpp"
#include "optomech/core/covariance.hpp"

namespace optomech {

// Drift matrix K of the linear Langevin dynamics, canonical basis.
struct DriftMatrix {
    Eigen::MatrixXd entries;
    std::string basis = "canonical";

    DriftMatrix() = default;
    explicit DriftMatrix(Eigen::MatrixXd k, std::string tag = "canonical")
        : entries(std::move(k)), basis(std::move(tag)) {
        if (entries.rows() != entries.cols())
            throw DimensionError("drift matrix must be square");
        if (!entries.allFinite()) throw ArgumentError("drift matrix has non-finite entries");
    }
    int dim() const { return static_cast<int>(entries.rows()); }
};

struct DiffusionMatrix {
    Eigen::MatrixXd entries;
    std::string basis = "canonical";

    DiffusionMatrix() = default;
    explicit DiffusionMatrix(Eigen::MatrixXd d, std::string tag = "canonical")
        : entries(std::move(d)), basis(std::move(tag)) {
        if (entries.rows() != entries.cols())
            throw DimensionError("diffusion matrix must be square");
        const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
        if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ArgumentError("diffusion matrix is not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries);
        if (es.eigenvalues().minCoeff() < -1e-12 * scale)
            throw ArgumentError("diffusion matrix is not positive semidefinite");
    }
    int dim() const { return static_cast<int>(entries.rows()); }
};

// All eigenvalues strictly in the open left half plane (Re < -1e-12).
inline bool is_stable(const DriftMatrix& k) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(k.entries, false);
    return es.eigenvalues().real().maxCoeff() < -1e-12;
}

// Slowest decay rate |Re lambda|_min of a stable drift matrix.
inline double slowest_decay_rate(const DriftMatrix& k) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(k.entries, false);
    return -es.eigenvalues().real().maxCoeff();
}

// Steady-state solution of K V + V K^T + D = 0 through complex-Schur
// back-substitution (Bartels-Stewart); a vectorized dense solve backs it up
// at small sizes if the residual check fails.
inline CovarianceMatrix solve_lyapunov(const DriftMatrix& k, const DiffusionMatrix& d) {
    const int n = k.dim();
    if (d.dim() != n) throw DimensionError("solve_lyapunov: K and D dimensions differ");
    {
        Eigen::EigenSolver<Eigen::MatrixXd> es(k.entries, false);
        int argmax = 0;
        es.eigenvalues().real().maxCoeff(&argmax);
        if (es.eigenvalues().real().maxCoeff() >= -1e-12) {
            std::ostringstream msg;
            msg << "solve_lyapunov: drift matrix is not stable, offending eigenvalue "
                << es.eigenvalues()(argmax).real() << " + " << es.eigenvalues()(argmax).imag()
                << "i";
            throw StabilityError(msg.str());
        }
    }

    using CMat = Eigen::MatrixXcd;
    Eigen::ComplexSchur<Eigen::MatrixXd> schur(k.entries);
    const CMat t = schur.matrixT();
    const CMat q = schur.matrixU();
    // K = Q T Q^H, K^T = conj(Q) T^T Q^T. With V = Q Y Q^T the equation
    // becomes T Y + Y T^T = -Q^H D conj(Q).
    const CMat dt = q.adjoint() * d.entries * q.conjugate();
    CMat y = CMat::Zero(n, n);
    for (int i = n - 1; i >= 0; --i) {
        for (int j = n - 1; j >= 0; --j) {
            std::complex<double> s = -dt(i, j);
            for (int m = i + 1; m < n; ++m) s -= t(i, m) * y(m, j);
            for (int m = j + 1; m < n; ++m) s -= y(i, m) * t(j, m);
            y(i, j) = s / (t(i, i) + t(j, j));
        }
    }
    Eigen::MatrixXd v = (q * y * q.transpose()).real();
    v = 0.5 * (v + v.transpose());

    const double dnorm = std::max(d.entries.norm(), 1e-300);
    double residual = (k.entries * v + v * k.entries.transpose() + d.entries).norm();
    if (residual > 1e-10 * dnorm) {
        // vec(V) solve on (I (x) K + K (x) I)
        Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n * n, n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m) {
                    big(i + n * j, m + n * j) += k.entries(i, m);
                    big(i + n * j, i + n * m) += k.entries(j, m);
                }
        Eigen::VectorXd rhs(n * n);
        for (int j = 0; j < n; ++j) rhs.segment(n * j, n) = -d.entries.col(j);
        Eigen::VectorXd x = big.fullPivLu().solve(rhs);
        Eigen::MatrixXd v2(n, n);
        for (int j = 0; j < n; ++j) v2.col(j) = x.segment(n * j, n);
        v2 = 0.5 * (v2 + v2.transpose());
        const double r2 = (k.entries * v2 + v2 * k.entries.transpose() + d.entries).norm();
        if (r2 < residual) {
            v = v2;
            residual = r2;
        }
        if (residual > 1e-10 * dnorm)
            throw ConvergenceError("solve_lyapunov: residual exceeds 1e-10 * ||D||");
    }
    return CovarianceMatrix(v);
}

}  // namespace optomech
