#pragma once

#include <stdexcept>
#include <string>

namespace lindyn {

/// Sequence space the operator acts on: lp(A) with 1 <= p < inf, or c0(A).
struct SpaceSpec {
    enum class Kind { lp, c0 };

    Kind kind = Kind::lp;
    double p = 2.0; // meaningful for lp only

    static SpaceSpec lp(double p) {
        if (!(p >= 1.0) || !std::isfinite(p))
            throw std::invalid_argument("lp space requires 1 <= p < inf");
        SpaceSpec s;
        s.kind = Kind::lp;
        s.p = p;
        return s;
    }
    static SpaceSpec c0() {
        SpaceSpec s;
        s.kind = Kind::c0;
        s.p = 0.0;
        return s;
    }

    bool is_lp() const { return kind == Kind::lp; }

    std::string name() const {
        if (kind == Kind::c0) return "c0";
        return "l" + std::to_string(p);
    }
};

} // namespace lindyn
