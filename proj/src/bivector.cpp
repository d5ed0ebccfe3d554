#include "lindyn/bivector.hpp"

#include <algorithm>
#include <cmath>

namespace lindyn {

double vector_norm(const BiVector& x, const SpaceSpec& space) {
    if (x.empty()) return 0.0;
    if (space.kind == SpaceSpec::Kind::c0) {
        double mx = 0.0;
        for (const auto& [i, v] : x.entries()) mx = std::max(mx, std::abs(v));
        return mx;
    }
    // scaled lp sum for overflow robustness on materialized vectors
    double mx = 0.0;
    for (const auto& [i, v] : x.entries()) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& [i, v] : x.entries()) sum += std::pow(std::abs(v) / mx, space.p);
    return mx * std::pow(sum, 1.0 / space.p);
}

} // namespace lindyn
