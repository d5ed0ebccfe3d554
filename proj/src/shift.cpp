#include "lindyn/shift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lindyn {

namespace {

void check_unilateral_support(const WeightSequence& w, const BiVector& x) {
    if (w.support() == Support::unilateral && !x.empty() && x.min_index() < 1)
        throw std::invalid_argument("vector has support below index 1 on a unilateral space");
}

// log of the coefficient picked up by e_j under T^n (n may be negative).
double step_log(const WeightSequence& w, Direction d, std::int64_t j, std::int64_t n,
                bool* hit_zero) {
    WeightSequence::LogSum s;
    bool invert = n < 0;
    std::int64_t m = invert ? -n : n;
    if (m == 0) return 0.0;
    if (d == Direction::forward) {
        s = invert ? w.cum_log_abs(j - m, j - 1) : w.cum_log_abs(j, j + m - 1);
    } else {
        s = invert ? w.cum_log_abs(j + 1, j + m) : w.cum_log_abs(j - m + 1, j);
    }
    if (s.zero_count > 0) *hit_zero = true;
    return invert ? -s.log_sum : s.log_sum;
}

} // namespace

BiVector apply_shift(const WeightSequence& w, const BiVector& x, Direction direction,
                     bool inverse) {
    check_unilateral_support(w, x);
    if (inverse && !w.invertible())
        throw std::invalid_argument("shift is not invertible");

    BiVector y;
    for (const auto& [j, v] : x.entries()) {
        if (direction == Direction::forward) {
            if (!inverse) {
                y.add(j + 1, w.weight_at(j) * v);
            } else {
                y.add(j - 1, v / w.weight_at(j - 1));
            }
        } else {
            if (!inverse) {
                if (w.support() == Support::unilateral && j == 1) continue;
                y.add(j - 1, w.weight_at(j) * v);
            } else {
                y.add(j + 1, v / w.weight_at(j + 1));
            }
        }
    }
    return y;
}

std::vector<std::pair<std::int64_t, Magnitude>> orbit_norms(const WeightSequence& w,
                                                            const BiVector& x,
                                                            const SpaceSpec& space,
                                                            std::int64_t n_min,
                                                            std::int64_t n_max,
                                                            Direction direction) {
    check_unilateral_support(w, x);
    if (n_min < 0 && !w.invertible())
        throw std::invalid_argument("negative exponents require an invertible shift");

    std::vector<std::pair<std::int64_t, Magnitude>> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, n_max - n_min + 1)));
    for (std::int64_t n = n_min; n <= n_max; ++n) {
        // coordinate log-magnitudes of T^n x
        std::vector<double> logs;
        logs.reserve(x.support_size());
        for (const auto& [j, v] : x.entries()) {
            // backward shifts annihilate coordinates pushed below index 1
            if (w.support() == Support::unilateral && direction == Direction::backward &&
                n > 0 && j - n < 1)
                continue;
            bool hit_zero = false;
            double lg = step_log(w, direction, j, n, &hit_zero);
            if (hit_zero) continue;
            logs.push_back(std::log(std::abs(v)) + lg);
        }
        if (logs.empty()) {
            out.emplace_back(n, Magnitude::zero());
            continue;
        }
        double mx = *std::max_element(logs.begin(), logs.end());
        double log_norm;
        if (space.kind == SpaceSpec::Kind::c0) {
            log_norm = mx;
        } else {
            double sum = 0.0;
            for (double lg : logs) sum += std::exp(space.p * (lg - mx));
            log_norm = mx + std::log(sum) / space.p;
        }
        out.emplace_back(n, Magnitude::from_log(log_norm));
    }
    return out;
}

Magnitude orbit_norm_at(const WeightSequence& w, const BiVector& x, const SpaceSpec& space,
                        std::int64_t n, Direction direction) {
    return orbit_norms(w, x, space, n, n, direction).front().second;
}

} // namespace lindyn
