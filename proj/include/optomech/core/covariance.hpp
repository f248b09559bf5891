#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

#include "optomech/common.hpp"

namespace optomech {

// Symplectic form Omega = diag_blocks([[0,1],[-1,0]]) in the canonical basis
// (q1,p1,q2,p2,...).
inline Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

// Second-moment matrix of the quadratures in the canonical basis
// (q1,p1,q2,p2,...), dimensionless with vacuum variance 1/2.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;

    explicit CovarianceMatrix(const Eigen::MatrixXd& entries) {
        if (entries.rows() != entries.cols())
            throw DimensionError("covariance matrix must be square");
        if (entries.rows() % 2 != 0)
            throw DimensionError("covariance matrix must have even dimension");
        const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
        if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ArgumentError("covariance matrix is not symmetric to 1e-12 relative");
        mat_ = 0.5 * (entries + entries.transpose());
        n_modes_ = static_cast<int>(entries.rows()) / 2;
    }

    static CovarianceMatrix vacuum(int n_modes) {
        return CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    static CovarianceMatrix thermal(int n_modes, double n_bar) {
        return CovarianceMatrix((n_bar + 0.5) *
                                Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    // Two-mode squeezed vacuum with squeezing parameter r, modes (1,2).
    static CovarianceMatrix two_mode_squeezed(double r) {
        const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
        Eigen::MatrixXd v(4, 4);
        v << c, 0, s, 0,
             0, c, 0, -s,
             s, 0, c, 0,
             0, -s, 0, c;
        return CovarianceMatrix(0.5 * v);
    }

    int n_modes() const { return n_modes_; }
    int dim() const { return 2 * n_modes_; }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    double operator()(int i, int j) const { return mat_(i, j); }

    bool is_physical(double tol = 1e-9) const;

private:
    Eigen::MatrixXd mat_;
    int n_modes_ = 0;
};

// Moduli of the eigenvalues of i*Omega*V, one per mode, ascending.
// Computed through the Williamson route: for V > 0, the singular values of
// L^T Omega L (V = L L^T) come in pairs (nu, nu).
inline std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v) {
    const int n = v.n_modes();
    const Eigen::MatrixXd omega = symplectic_form(n);
    Eigen::LLT<Eigen::MatrixXd> llt(v.matrix());
    std::vector<double> nus;
    nus.reserve(n);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd l = llt.matrixL();
        Eigen::MatrixXd k = l.transpose() * omega * l;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
        Eigen::VectorXd sv = svd.singularValues();  // descending, pairs
        for (int i = 0; i < n; ++i) nus.push_back(sv(2 * i));
    } else {
        // Semi-definite or slightly indefinite input: fall back to the
        // eigenvalues of Omega*V, which come in pairs +-i*nu.
        Eigen::EigenSolver<Eigen::MatrixXd> es(omega * v.matrix(), false);
        std::vector<double> imags;
        for (int i = 0; i < 2 * n; ++i) imags.push_back(std::abs(es.eigenvalues()(i).imag()));
        std::sort(imags.begin(), imags.end());
        for (int i = 0; i < n; ++i) nus.push_back(0.5 * (imags[2 * i] + imags[2 * i + 1]));
    }
    std::sort(nus.begin(), nus.end());
    return nus;
}

inline double min_symplectic_eigenvalue(const CovarianceMatrix& v) {
    return symplectic_eigenvalues(v).front();
}

inline bool CovarianceMatrix::is_physical(double tol) const {
    return min_symplectic_eigenvalue(*this) >= 0.5 - tol;
}

// Momentum-sign flip on the selected modes (mode indices are 0-based).
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& v,
                                          const std::vector<int>& mode_set) {
    if (mode_set.empty())
        throw ArgumentError("partial transpose: mode set must be non-empty");
    if (static_cast<int>(mode_set.size()) >= v.n_modes())
        throw ArgumentError("partial transpose: mode set must be a proper subset");
    Eigen::VectorXd p = Eigen::VectorXd::Ones(v.dim());
    for (int m : mode_set) {
        if (m < 0 || m >= v.n_modes())
            throw ArgumentError("partial transpose: mode index out of range");
        p(2 * m + 1) = -1.0;
    }
    Eigen::MatrixXd out = p.asDiagonal() * v.matrix() * p.asDiagonal();
    return CovarianceMatrix(out);
}

// Keep only the selected modes, canonical order preserved.
inline CovarianceMatrix reduce(const CovarianceMatrix& v, const std::vector<int>& modes) {
    if (modes.empty()) throw ArgumentError("reduce: mode set must be non-empty");
    std::vector<int> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    for (int m : sorted)
        if (m < 0 || m >= v.n_modes()) throw ArgumentError("reduce: mode index out of range");
    const int nk = static_cast<int>(sorted.size());
    Eigen::MatrixXd out(2 * nk, 2 * nk);
    for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nk; ++b)
            out.block<2, 2>(2 * a, 2 * b) = v.matrix().block<2, 2>(2 * sorted[a], 2 * sorted[b]);
    return CovarianceMatrix(out);
}

// Permutation of the 2N quadrature slots; maps a matrix written in a source
// ordering into the canonical one (row/column relabelling).
class BasisPermutation {
public:
    BasisPermutation() = default;

    // perm[i] = canonical slot of source slot i.
    explicit BasisPermutation(std::vector<int> perm) : perm_(std::move(perm)) {
        std::vector<bool> seen(perm_.size(), false);
        for (int p : perm_) {
            if (p < 0 || p >= static_cast<int>(perm_.size()) || seen[p])
                throw ArgumentError("basis permutation: not a valid permutation");
            seen[p] = true;
        }
    }

    int size() const { return static_cast<int>(perm_.size()); }

    Eigen::MatrixXd to_canonical(const Eigen::MatrixXd& m) const {
        check(m);
        Eigen::MatrixXd out(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) out(perm_[i], perm_[j]) = m(i, j);
        return out;
    }

    Eigen::MatrixXd from_canonical(const Eigen::MatrixXd& m) const {
        check(m);
        Eigen::MatrixXd out(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) out(i, j) = m(perm_[i], perm_[j]);
        return out;
    }

    BasisPermutation inverse() const {
        std::vector<int> inv(perm_.size());
        for (int i = 0; i < size(); ++i) inv[perm_[i]] = i;
        return BasisPermutation(inv);
    }

private:
    void check(const Eigen::MatrixXd& m) const {
        if (m.rows() != size() || m.cols() != size())
            throw DimensionError("basis permutation: matrix dimension mismatch");
    }
    std::vector<int> perm_;
};

}  // namespace optomech
