#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "optomech/common.hpp"

namespace optomech {

// Sampled real phase-space function W(re, im) on a uniform rectangular grid;
// values are renormalized so the grid integral is 1, with the raw integral
// kept for diagnostics.
struct WignerGrid {
    std::vector<double> re_axis;
    std::vector<double> im_axis;
    Eigen::MatrixXd values;  // values(i, j) = W(re_axis[i], im_axis[j])
    double norm_raw = 0.0;   // integral before renormalization
    double norm_scale = 1.0; // factor applied to raw values

    double dre() const { return re_axis.size() > 1 ? re_axis[1] - re_axis[0] : 0.0; }
    double dim() const { return im_axis.size() > 1 ? im_axis[1] - im_axis[0] : 0.0; }

    double integral() const {
        double s = 0.0;
        for (int i = 0; i < values.rows(); ++i)
            for (int j = 0; j < values.cols(); ++j) {
                double w = 1.0;
                if (i == 0 || i == values.rows() - 1) w *= 0.5;
                if (j == 0 || j == values.cols() - 1) w *= 0.5;
                s += w * values(i, j);
            }
        return s * dre() * dim();
    }

    double value_at(double re, double im) const {
        // nearest-sample lookup; the grids are dense enough for diagnostics
        const int i = static_cast<int>(std::lround((re - re_axis.front()) / dre()));
        const int j = static_cast<int>(std::lround((im - im_axis.front()) / dim()));
        if (i < 0 || j < 0 || i >= static_cast<int>(re_axis.size()) ||
            j >= static_cast<int>(im_axis.size()))
            throw ArgumentError("WignerGrid::value_at: point outside the grid");
        return values(i, j);
    }

    double min_value() const { return values.minCoeff(); }
};

struct GridSpec {
    int points = 161;         // per axis, odd keeps the origin on the grid
    double half_width = 5.0;  // in units of the state's widest scale
    double center_re = 0.0;
    double center_im = 0.0;
};

// Samples f on the grid, widening symmetrically until the boundary amplitude
// falls below 1e-8 of the peak, then renormalizes to unit integral.
inline WignerGrid sample_wigner(const std::function<double(double, double)>& f,
                                GridSpec spec, double scale_unit = 1.0) {
    double half = spec.half_width * scale_unit;
    for (int attempt = 0; attempt < 12; ++attempt) {
        WignerGrid grid;
        const int n = spec.points;
        grid.re_axis.resize(n);
        grid.im_axis.resize(n);
        for (int i = 0; i < n; ++i) {
            grid.re_axis[i] = spec.center_re - half + 2.0 * half * i / (n - 1);
            grid.im_axis[i] = spec.center_im - half + 2.0 * half * i / (n - 1);
        }
        grid.values.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) grid.values(i, j) = f(grid.re_axis[i], grid.im_axis[j]);

        double peak = grid.values.cwiseAbs().maxCoeff();
        double edge = 0.0;
        for (int i = 0; i < n; ++i) {
            edge = std::max({edge, std::abs(grid.values(i, 0)), std::abs(grid.values(i, n - 1)),
                             std::abs(grid.values(0, i)), std::abs(grid.values(n - 1, i))});
        }
        if (peak <= 0.0) throw AccuracyError("sample_wigner: function vanished on the grid");
        if (edge > 1e-8 * peak) {
            half *= 1.5;
            continue;
        }
        grid.norm_raw = grid.integral();
        if (grid.norm_raw <= 0.0)
            throw AccuracyError("sample_wigner: raw grid integral is not positive");
        grid.norm_scale = 1.0 / grid.norm_raw;
        grid.values *= grid.norm_scale;
        return grid;
    }
    throw AccuracyError("sample_wigner: grid widening failed to contain the state");
}

}  // namespace optomech
