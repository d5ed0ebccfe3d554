#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lindyn/bivector.hpp"
#include "lindyn/magnitude.hpp"
#include "lindyn/space.hpp"
#include "lindyn/weights.hpp"

namespace lindyn {

enum class Direction { forward, backward };

/**
 * Apply one step of the weighted shift to a finitely supported vector.
 *
 *   forward  F_w: e_k -> w_k e_{k+1}
 *   backward B_w: e_k -> w_k e_{k-1}   (unilateral: e_1 -> 0)
 *
 * inverse = true applies F_w^{-1} / B_w^{-1}; requires an invertible shift.
 * Complex phases are materialized exactly here; classification paths work
 * on magnitudes only.
 */
BiVector apply_shift(const WeightSequence& w, const BiVector& x, Direction direction,
                     bool inverse = false);

/**
 * ||T^n x|| for n in [n_min, n_max], T the (forward or backward) shift.
 * Computed coordinate-wise in the log domain, so orbits through 2^\pm100000
 * neither overflow nor underflow. Negative exponents require invertibility.
 */
std::vector<std::pair<std::int64_t, Magnitude>> orbit_norms(const WeightSequence& w,
                                                            const BiVector& x,
                                                            const SpaceSpec& space,
                                                            std::int64_t n_min,
                                                            std::int64_t n_max,
                                                            Direction direction = Direction::forward);

/// One-shot ||T^n x|| (same semantics as orbit_norms).
Magnitude orbit_norm_at(const WeightSequence& w, const BiVector& x, const SpaceSpec& space,
                        std::int64_t n, Direction direction = Direction::forward);

/// Weighted shift as a concrete operator: weights + direction + ambient space.
struct ShiftOperator {
    WeightSequence weights;
    Direction direction = Direction::forward;
    SpaceSpec space = SpaceSpec::lp(2.0);

    bool invertible() const { return weights.invertible(); }
    BiVector apply(const BiVector& x, bool inverse = false) const {
        return apply_shift(weights, x, direction, inverse);
    }
};

} // namespace lindyn
