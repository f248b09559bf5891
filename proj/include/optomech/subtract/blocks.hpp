#pragma once

#include <Eigen/Dense>

#include "optomech/core/covariance.hpp"

namespace optomech::subtract {

// Block entries of the mirror-cavity covariance matrix in the doubled
// convention (vacuum variance 1), mirror block diagonal. This is the input
// format of the conditional-state closed forms.
struct TwoModeBlocks {
    double m11 = 1, m22 = 1;  // mechanical q, p variances
    double c11 = 1, c22 = 1;  // field x, y variances
    double r11 = 0, r12 = 0, r21 = 0, r22 = 0;  // (q,p) x (x,y) correlations

    // doubled 4x4 matrix, order (q, p, x, y)
    Eigen::Matrix4d assembled() const {
        Eigen::Matrix4d s;
        s << m11, 0, r11, r12,
             0, m22, r21, r22,
             r11, r21, c11, 0,
             r12, r22, 0, c22;
        return s;
    }

    CovarianceMatrix as_covariance() const { return CovarianceMatrix(0.5 * assembled()); }

    bool is_physical(double tol = 1e-9) const { return as_covariance().is_physical(tol); }

    // no quadrature squeezed below vacuum (assumption behind the printed
    // negativity inequality)
    bool no_squeezing_below_vacuum() const {
        return m11 >= 1.0 - 1e-12 && m22 >= 1.0 - 1e-12 && c11 >= 1.0 - 1e-12 &&
               c22 >= 1.0 - 1e-12;
    }

    static TwoModeBlocks from_covariance(const CovarianceMatrix& v) {
        if (v.n_modes() != 2) throw DimensionError("TwoModeBlocks: needs a two-mode state");
        const Eigen::MatrixXd s = 2.0 * v.matrix();
        const double offm = std::abs(s(0, 1)), offc = std::abs(s(2, 3));
        const double scale = std::sqrt(s(0, 0) * s(1, 1));
        if (offm > 1e-3 * scale || offc > 1e-3 * std::sqrt(s(2, 2) * s(3, 3)))
            throw ArgumentError("TwoModeBlocks: local blocks are not diagonal");
        TwoModeBlocks b;
        b.m11 = s(0, 0);
        b.m22 = s(1, 1);
        b.c11 = s(2, 2);
        b.c22 = s(3, 3);
        b.r11 = s(0, 2);
        b.r12 = s(0, 3);
        b.r21 = s(1, 2);
        b.r22 = s(1, 3);
        return b;
    }
};

}  // namespace optomech::subtract
