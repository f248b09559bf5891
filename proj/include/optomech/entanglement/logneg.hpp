#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "optomech/core/covariance.hpp"

namespace optomech::ent {

struct Bipartition {
    std::vector<int> side_a;
    std::vector<int> side_b;
};

// E = max(0, -ln 2 nu) with nu the smallest symplectic eigenvalue after
// momentum inversion of side_b.
inline double log_negativity(const CovarianceMatrix& v, const Bipartition& split,
                             double physicality_tol = 1e-6) {
    std::vector<bool> seen(v.n_modes(), false);
    for (int m : split.side_a) {
        if (m < 0 || m >= v.n_modes() || seen[m])
            throw ArgumentError("log_negativity: invalid bipartition");
        seen[m] = true;
    }
    for (int m : split.side_b) {
        if (m < 0 || m >= v.n_modes() || seen[m])
            throw ArgumentError("log_negativity: invalid bipartition");
        seen[m] = true;
    }
    for (bool s : seen)
        if (!s) throw ArgumentError("log_negativity: bipartition must cover all modes");
    if (!v.is_physical(physicality_tol))
        throw PhysicalityError("log_negativity: covariance matrix is unphysical");
    const double nu = min_symplectic_eigenvalue(partial_transpose(v, split.side_b));
    return std::max(0.0, -std::log(2.0 * nu));
}

// Pairwise E on the reduced two-mode state of modes (a, b).
inline double log_negativity_pair(const CovarianceMatrix& v, int a, int b,
                                  double physicality_tol = 1e-6) {
    const CovarianceMatrix red = reduce(v, {std::min(a, b), std::max(a, b)});
    return log_negativity(red, {{0}, {1}}, physicality_tol);
}

}  // namespace optomech::ent
