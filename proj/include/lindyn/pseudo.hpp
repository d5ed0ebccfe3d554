#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lindyn/bivector.hpp"
#include "lindyn/matrix.hpp"
#include "lindyn/shift.hpp"

namespace lindyn {

/// Finite window [n_min, n_max] of points x_n with defects
/// z_n = x_{n+1} - T x_n for n in [n_min, n_max - 1]. delta is the max
/// defect norm; defects are recomputable from the points to ulp scale.
template <class Vec>
struct PseudoTrajectoryT {
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    std::vector<Vec> points;
    std::vector<Vec> defects;
    std::vector<double> defect_norms;
    double delta = 0.0;

    const Vec& point(std::int64_t n) const {
        if (n < n_min || n > n_max) throw std::out_of_range("point index outside the window");
        return points[static_cast<std::size_t>(n - n_min)];
    }
    const Vec& defect(std::int64_t n) const {
        if (n < n_min || n >= n_max) throw std::out_of_range("defect index outside the window");
        return defects[static_cast<std::size_t>(n - n_min)];
    }
};

using PseudoTrajectory = PseudoTrajectoryT<BiVector>;
using MatrixPseudoTrajectory = PseudoTrajectoryT<Eigen::VectorXcd>;

/// Random walk x_{n+1} = T x_n + z_n with single-coordinate kicks
/// z_n = (+/-) delta e_j, so every defect norm equals delta exactly in any
/// l_p and in c0. Forward kicks are drawn first (n = 0 .. n_max-1), then the
/// backward leg x_{n-1} = T^{-1}(x_n - z_{n-1}) for n = 0 down to n_min+1,
/// which requires an invertible operator. delta = 0 produces the exact
/// orbit. Kicks land on coordinates |j| <= band for shifts and 0 <= j < dim
/// for matrices. Deterministic for a fixed seed.
PseudoTrajectory generate_pseudotrajectory(const ShiftOperator& op, const BiVector& x0,
                                           double delta, std::int64_t n_min, std::int64_t n_max,
                                           std::uint64_t seed, std::int64_t band = 4);
MatrixPseudoTrajectory generate_pseudotrajectory(const MatrixOp& a, const Eigen::VectorXcd& x0,
                                                 double delta, std::int64_t n_min,
                                                 std::int64_t n_max, std::uint64_t seed);

/// Same window with defects scaled by s >= 0 and points rebuilt from the
/// anchor x_0 (or x_{n_min} for forward-only windows shifted right of 0).
PseudoTrajectory rescale_defects(const ShiftOperator& op, const PseudoTrajectory& pt, double s);
MatrixPseudoTrajectory rescale_defects(const MatrixOp& a, const MatrixPseudoTrajectory& pt,
                                       double s);

} // namespace lindyn
