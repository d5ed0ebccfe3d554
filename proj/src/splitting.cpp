#include "lindyn/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace lindyn {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double abs_at(const WeightSequence& w, std::int64_t n) { return std::abs(w.weight_at(n)); }

double period_max(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

double period_min(const std::vector<Complex>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : v) m = std::min(m, std::abs(c));
    return m;
}

/// Per-step contraction rate read off a periodic tail. Single-element
/// periods skip the log/exp round trip so constants like 1/2 stay exact.
double tail_rate(const std::vector<Complex>& period, double log_gm, bool inverted) {
    if (period.size() == 1) {
        double m = std::abs(period[0]);
        return inverted ? 1.0 / m : m;
    }
    return std::exp(inverted ? -log_gm : log_gm);
}

/// Extreme of |w_k ... w_{k+n-1}| over windows [k, k+n-1] inside [lo, hi]
/// (unbounded side = nullopt) and the weight domain. Pure-tail windows
/// repeat per period, so one period of representative starts per side plus
/// every core-overlapping start covers the sup/inf exactly.
std::optional<double> window_extreme(const WeightSequence& w, std::int64_t n,
                                     std::optional<std::int64_t> lo,
                                     std::optional<std::int64_t> hi, bool want_max) {
    const auto pl = static_cast<std::int64_t>(w.left_period().size());
    const auto pr = static_cast<std::int64_t>(w.right_period().size());
    std::int64_t k_lo = w.core_start() - n - std::max<std::int64_t>(pl, 1) + 1;
    std::int64_t k_hi = w.core_end() + std::max<std::int64_t>(pr, 1);
    if (lo) k_lo = std::max(k_lo, *lo);
    if (hi) k_hi = std::min(k_hi, *hi - n + 1);
    k_lo = std::max(k_lo, w.domain_min());
    if (k_hi < k_lo) return std::nullopt;

    std::optional<double> best;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        double prod = 1.0;
        for (std::int64_t j = k; j < k + n; ++j) prod *= abs_at(w, j);
        if (!best || (want_max ? prod > *best : prod < *best)) best = prod;
    }
    return best;
}

struct GmInfo {
    GmSide side_left = GmSide::below_one; // unused for unilateral
    GmSide side_right = GmSide::below_one;
    std::optional<double> log_left;
    double log_right = 0.0;
};

GmInfo read_gms(const WeightSequence& w, const ClassifierConfig& cfg) {
    GmInfo g;
    g.log_right = w.log_gm_right();
    g.side_right = gm_side(g.log_right, cfg.gm_tolerance);
    if (w.has_left_tail()) {
        g.log_left = w.log_gm_left();
        g.side_left = gm_side(*g.log_left, cfg.gm_tolerance);
    }
    return g;
}

bool side_decided(GmSide s) { return s == GmSide::below_one || s == GmSide::above_one; }

std::vector<Complex> gm_offenders(const GmInfo& g) {
    std::vector<Complex> off;
    if (g.log_left) off.emplace_back(std::exp(*g.log_left), 0.0);
    off.emplace_back(std::exp(g.log_right), 0.0);
    return off;
}

/// All weights in [lo, hi] (intersected with the domain) strictly below /
/// above modulus 1; second value is the worst per-step rate over the range
/// (max |w| when below, max 1/|w| when above). Scans through one period
/// beyond the core; tails repeat after that.
std::pair<bool, double> pointwise_range(const WeightSequence& w, std::optional<std::int64_t> lo,
                                        std::optional<std::int64_t> hi, bool below) {
    const auto pl = static_cast<std::int64_t>(w.left_period().size());
    const auto pr = static_cast<std::int64_t>(w.right_period().size());
    std::int64_t a = w.core_start() - (w.has_left_tail() ? pl : 0);
    std::int64_t b = w.core_end() + pr;
    if (lo) a = std::max(a, *lo);
    if (hi) b = std::min(b, *hi);
    a = std::max(a, w.domain_min());
    double rate = 0.0;
    for (std::int64_t n = a; n <= b; ++n) {
        double m = abs_at(w, n);
        if (below) {
            if (!(m < 1.0)) return {false, 0.0};
            rate = std::max(rate, m);
        } else {
            if (!(m > 1.0)) return {false, 0.0};
            rate = std::max(rate, 1.0 / m);
        }
    }
    return {true, rate};
}

std::int64_t fallback_n_check(const WeightSequence& w) {
    const auto pl = static_cast<std::int64_t>(w.left_period().size());
    const auto pr = static_cast<std::int64_t>(w.right_period().size());
    std::int64_t span = w.core_end() >= w.core_start() ? w.core_end() - w.core_start() + 1 : 0;
    return std::max<std::int64_t>(64, span + 4 * std::max<std::int64_t>({pl, pr, 1}));
}

/// C = max over n <= n_check of (window extreme vs t^n) on one side of the
/// cut. Forward restrictions read products directly; inverse restrictions
/// read 1 / (min product).
double sweep_big_c(const WeightSequence& w, std::optional<std::int64_t> lo,
                   std::optional<std::int64_t> hi, double t, bool inverse,
                   std::int64_t n_check) {
    double c = 1.0;
    double tpow = 1.0;
    for (std::int64_t n = 1; n <= n_check; ++n) {
        tpow *= t;
        if (tpow < 1e-280) break; // transients are long dead at this depth
        auto ext = window_extreme(w, n, lo, hi, !inverse);
        if (!ext) continue;
        double growth = inverse ? (*ext == 0.0 ? std::numeric_limits<double>::infinity()
                                               : 1.0 / *ext)
                                : *ext;
        c = std::max(c, growth / tpow);
    }
    if (!std::isfinite(c))
        throw NotSplittable("a zero weight inside the unstable range blocks the inverse bound");
    return c;
}

Splitting whole_space_stable(double t, double big_c, std::int64_t n_check, std::string detail) {
    Splitting s;
    s.kind = SplitKind::coordinate_cut;
    s.cut = Splitting::everything_cut;
    s.stable_upper = true;
    s.t = t;
    s.big_c = big_c;
    s.n_check = n_check;
    s.detail = std::move(detail);
    return s;
}

Splitting whole_space_unstable(double t, double big_c, std::int64_t n_check,
                               std::string detail) {
    Splitting s = whole_space_stable(t, big_c, n_check, std::move(detail));
    s.cut = Splitting::nothing_cut;
    return s;
}

/// Annulus case for a forward shift: stable side = upper indices. Scans for
/// a pointwise cut first (C = 1, every constant a single weight modulus);
/// falls back to the tail geometric means with a window-product sweep, the
/// whole core placed on the unstable side.
Splitting annulus_forward(const WeightSequence& w, const GmInfo& g) {
    const std::int64_t cs = w.core_start();
    const std::int64_t ce = w.core_end();
    // suffix_below[i]: core values from position i on all have modulus < 1
    const auto& core = w.core().values;
    const auto len = static_cast<std::int64_t>(core.size());
    std::vector<double> sufmax(len + 1, 0.0);
    std::vector<char> sufbelow(len + 1, 1);
    for (std::int64_t i = len - 1; i >= 0; --i) {
        double m = std::abs(core[i]);
        sufbelow[i] = sufbelow[i + 1] && m < 1.0;
        sufmax[i] = std::max(m, sufmax[i + 1]);
    }
    std::vector<double> premin(len + 1, std::numeric_limits<double>::infinity());
    std::vector<char> preabove(len + 1, 1);
    for (std::int64_t i = 0; i < len; ++i) {
        double m = std::abs(core[i]);
        preabove[i + 1] = preabove[i] && m > 1.0;
        premin[i + 1] = std::min(m, premin[i]);
    }
    double right_max = period_max(w.right_period());
    double left_min = period_min(w.left_period());
    if (right_max < 1.0 && left_min > 1.0) {
        for (std::int64_t c = cs; c <= ce + 1; ++c) {
            std::int64_t i = c - cs;
            if (!sufbelow[i] || !preabove[i]) continue;
            double t_stable = std::max(sufmax[i], right_max);
            double inv_min = std::min(premin[i], left_min);
            double t = std::max(t_stable, 1.0 / inv_min);
            Splitting s;
            s.cut = c;
            s.t = t;
            s.big_c = 1.0;
            s.n_check = 1;
            s.detail = "pointwise cut at " + std::to_string(c) + ": stable weights stay <= " +
                       fmt(t_stable) + " and unstable weights >= " + fmt(inv_min) +
                       " in modulus; C = 1";
            return s;
        }
    }
    // no pointwise cut: tails decide on average, the core is swept into C
    if (!w.invertible())
        throw NotSplittable(
            "no pointwise cut and a zero weight blocks the averaged inverse bound",
            gm_offenders(g));
    std::int64_t cut = ce + 1;
    double t_stable = tail_rate(w.right_period(), g.log_right, false);
    double t_unstable = tail_rate(w.left_period(), *g.log_left, true);
    double t = std::max(t_stable, t_unstable);
    std::int64_t n_check = fallback_n_check(w);
    double c_m = sweep_big_c(w, cut, std::nullopt, t, false, n_check);
    double c_n = sweep_big_c(w, std::nullopt, cut - 2, t, true, n_check);
    Splitting s;
    s.cut = cut;
    s.t = t;
    s.big_c = std::max(c_m, c_n);
    s.n_check = n_check;
    s.detail = "averaged cut at " + std::to_string(cut) + ": t = " + fmt(t) +
               " from the tail geometric means, C = " + fmt(s.big_c) +
               " swept over window products up to n = " + std::to_string(n_check);
    return s;
}

/// Mirror for a backward shift: stable side = lower indices, the restriction
/// of B_w to {supp <= cut-1} reads weights <= cut-1 and the inverse on the
/// upper side reads weights >= cut+1.
Splitting annulus_backward(const WeightSequence& w, const GmInfo& g) {
    const std::int64_t cs = w.core_start();
    const std::int64_t ce = w.core_end();
    const auto& core = w.core().values;
    const auto len = static_cast<std::int64_t>(core.size());
    std::vector<double> premax(len + 1, 0.0);
    std::vector<char> prebelow(len + 1, 1);
    for (std::int64_t i = 0; i < len; ++i) {
        double m = std::abs(core[i]);
        prebelow[i + 1] = prebelow[i] && m < 1.0;
        premax[i + 1] = std::max(m, premax[i]);
    }
    std::vector<double> sufmin(len + 1, std::numeric_limits<double>::infinity());
    std::vector<char> sufabove(len + 1, 1);
    for (std::int64_t i = len - 1; i >= 0; --i) {
        double m = std::abs(core[i]);
        sufabove[i] = sufabove[i + 1] && m > 1.0;
        sufmin[i] = std::min(m, sufmin[i + 1]);
    }
    double left_max = period_max(w.left_period());
    double right_min = period_min(w.right_period());
    if (left_max < 1.0 && right_min > 1.0) {
        for (std::int64_t c = cs; c <= ce + 1; ++c) {
            std::int64_t i = c - cs;
            if (!prebelow[i] || !sufabove[i]) continue;
            double t_stable = std::max(premax[i], left_max);
            double inv_min = std::min(sufmin[i], right_min);
            double t = std::max(t_stable, 1.0 / inv_min);
            Splitting s;
            s.cut = c;
            s.stable_upper = false;
            s.t = t;
            s.big_c = 1.0;
            s.n_check = 1;
            s.detail = "pointwise cut at " + std::to_string(c) +
                       " (stable side below): stable weights stay <= " + fmt(t_stable) +
                       " and unstable weights >= " + fmt(inv_min) + " in modulus; C = 1";
            return s;
        }
    }
    if (!w.invertible())
        throw NotSplittable(
            "no pointwise cut and a zero weight blocks the averaged inverse bound",
            gm_offenders(g));
    std::int64_t cut = cs;
    double t_stable = tail_rate(w.left_period(), *g.log_left, false);
    double t_unstable = tail_rate(w.right_period(), g.log_right, true);
    double t = std::max(t_stable, t_unstable);
    std::int64_t n_check = fallback_n_check(w);
    double c_m = sweep_big_c(w, std::nullopt, cut - 1, t, false, n_check);
    double c_n = sweep_big_c(w, cut + 1, std::nullopt, t, true, n_check);
    Splitting s;
    s.cut = cut;
    s.stable_upper = false;
    s.t = t;
    s.big_c = std::max(c_m, c_n);
    s.n_check = n_check;
    s.detail = "averaged cut at " + std::to_string(cut) + " (stable side below): t = " + fmt(t) +
               ", C = " + fmt(s.big_c) + " swept up to n = " + std::to_string(n_check);
    return s;
}

} // namespace

BiVector stable_part(const Splitting& s, const BiVector& x) {
    if (s.kind != SplitKind::coordinate_cut)
        throw std::invalid_argument("spectral splittings act on coordinate vectors");
    BiVector out;
    for (const auto& [n, v] : x.entries())
        if (s.stable_index(n)) out.set(n, v);
    return out;
}

BiVector unstable_part(const Splitting& s, const BiVector& x) {
    if (s.kind != SplitKind::coordinate_cut)
        throw std::invalid_argument("spectral splittings act on coordinate vectors");
    BiVector out;
    for (const auto& [n, v] : x.entries())
        if (!s.stable_index(n)) out.set(n, v);
    return out;
}

Eigen::VectorXcd stable_part(const Splitting& s, const Eigen::VectorXcd& x) {
    if (s.kind != SplitKind::spectral || !s.spectral)
        throw std::invalid_argument("coordinate-cut splittings act on sequence vectors");
    if (s.spectral->p_stable.rows() != x.size())
        throw std::invalid_argument("vector dimension does not match the splitting");
    return s.spectral->p_stable * x;
}

Eigen::VectorXcd unstable_part(const Splitting& s, const Eigen::VectorXcd& x) {
    if (s.kind != SplitKind::spectral || !s.spectral)
        throw std::invalid_argument("coordinate-cut splittings act on sequence vectors");
    if (s.spectral->p_unstable.rows() != x.size())
        throw std::invalid_argument("vector dimension does not match the splitting");
    return s.spectral->p_unstable * x;
}

Splitting build_splitting(const ShiftOperator& op, const ClassifierConfig& cfg) {
    const WeightSequence& w = op.weights;
    if (!w.has_periodic_tails())
        throw NotSplittable("the block family has no periodic tails to verify a splitting from");

    GmInfo g = read_gms(w, cfg);
    if (!side_decided(g.side_right) || (w.has_left_tail() && !side_decided(g.side_left)))
        throw NotSplittable("a tail geometric mean sits on or within " + fmt(cfg.gm_tolerance) +
                                " of the unit circle; the spectrum meets it",
                            gm_offenders(g));
    const bool fw = op.direction == Direction::forward;

    if (!w.has_left_tail()) {
        // one-sided shifts have disc spectrum: only a fully stable splitting exists
        if (g.side_right != GmSide::below_one)
            throw NotSplittable("the one-sided spectrum is a disc reaching past the unit circle",
                                gm_offenders(g));
        auto [ok, rate] = pointwise_range(w, std::nullopt, std::nullopt, true);
        if (ok)
            return whole_space_stable(rate, 1.0, 1,
                                      "every weight modulus <= " + fmt(rate) + "; M = X, C = 1");
        double t = tail_rate(w.right_period(), g.log_right, false);
        std::int64_t n_check = fallback_n_check(w);
        double c = sweep_big_c(w, std::nullopt, std::nullopt, t, false, n_check);
        return whole_space_stable(t, c, n_check,
                                  "M = X with t = " + fmt(t) + " from the tail geometric mean, C = " +
                                      fmt(c) + " swept up to n = " + std::to_string(n_check));
    }

    const bool l_below = g.side_left == GmSide::below_one;
    const bool r_below = g.side_right == GmSide::below_one;
    if (l_below && r_below) {
        auto [ok, rate] = pointwise_range(w, std::nullopt, std::nullopt, true);
        if (ok)
            return whole_space_stable(rate, 1.0, 1,
                                      "every weight modulus <= " + fmt(rate) + "; M = X, C = 1");
        double t = std::max(tail_rate(w.left_period(), *g.log_left, false),
                            tail_rate(w.right_period(), g.log_right, false));
        std::int64_t n_check = fallback_n_check(w);
        double c = sweep_big_c(w, std::nullopt, std::nullopt, t, false, n_check);
        return whole_space_stable(t, c, n_check,
                                  "M = X with t = " + fmt(t) + ", C = " + fmt(c) +
                                      " swept up to n = " + std::to_string(n_check));
    }
    if (!l_below && !r_below) {
        if (!w.invertible())
            throw NotSplittable("both tails grow but a zero weight blocks the inverse",
                                gm_offenders(g));
        auto [ok, rate] = pointwise_range(w, std::nullopt, std::nullopt, false);
        if (ok)
            return whole_space_unstable(rate, 1.0, 1,
                                        "every weight modulus >= " + fmt(1.0 / rate) +
                                            "; N = X, C = 1");
        double t = std::max(tail_rate(w.left_period(), *g.log_left, true),
                            tail_rate(w.right_period(), g.log_right, true));
        std::int64_t n_check = fallback_n_check(w);
        double c = sweep_big_c(w, std::nullopt, std::nullopt, t, true, n_check);
        return whole_space_unstable(t, c, n_check,
                                    "N = X with t = " + fmt(t) + ", C = " + fmt(c) +
                                        " swept up to n = " + std::to_string(n_check));
    }
    // one tail on each side of the circle: an annulus, if the geometry
    // matches the direction the shift moves support
    if (fw ? (r_below && !l_below) : (l_below && !r_below))
        return fw ? annulus_forward(w, g) : annulus_backward(w, g);
    throw NotSplittable(std::string("the tails contract the wrong way for a ") +
                            (fw ? "forward" : "backward") +
                            " shift: no invariant stable/unstable pair",
                        gm_offenders(g));
}

Splitting build_splitting(const MatrixOp& a) {
    Verdict h = is_hyperbolic_matrix(a);
    if (h.value != Truth::True) {
        std::vector<Complex> off;
        for (const auto& ev : a.eigenvalues())
            if (std::abs(std::abs(ev) - 1.0) <= a.bands().circle_band) off.push_back(ev);
        throw NotSplittable("no spectral splitting: " + h.detail, off);
    }
    SpectralSplit sp = hyperbolic_splitting(a);
    Splitting s;
    s.kind = SplitKind::spectral;
    s.cut = 0;
    s.beta = std::max(1.0, sp.beta);
    double t = 0.0;
    double c = 1.0;
    std::int64_t n_check = 1;
    if (sp.stable_dim() > 0) {
        t = std::max(t, sp.stable_power.rate);
        c = std::max(c, sp.stable_power.scale);
        n_check = std::max(n_check, sp.stable_power.n_check);
    }
    if (sp.unstable_dim() > 0) {
        t = std::max(t, sp.unstable_power.rate);
        c = std::max(c, sp.unstable_power.scale);
        n_check = std::max(n_check, sp.unstable_power.n_check);
    }
    s.t = t;
    s.big_c = c;
    s.n_check = n_check;
    s.detail = "spectral splitting with " + std::to_string(sp.stable_dim()) + " stable and " +
               std::to_string(sp.unstable_dim()) + " unstable dimensions; beta = " + fmt(s.beta) +
               ", C = " + fmt(c) + ", t = " + fmt(t);
    s.spectral = std::move(sp);
    return s;
}

double shadow_constant(const Splitting& s) {
    if (!(s.t >= 0.0 && s.t < 1.0))
        throw std::invalid_argument("splitting rate must lie in [0, 1)");
    return 2.0 * s.beta * s.big_c / (1.0 - s.t);
}

double shadow_constant_lp(const Splitting& s, double p) {
    if (!(s.t >= 0.0 && s.t < 1.0))
        throw std::invalid_argument("splitting rate must lie in [0, 1)");
    if (!(p >= 1.0)) throw std::invalid_argument("lp shadowing constants need p >= 1");
    if (p == 1.0) return s.big_c / (1.0 - s.t);
    double q = p / (p - 1.0);
    double sum_q = 1.0 / (1.0 - std::pow(s.t, q / 2.0));
    double sum_p = 1.0 / (1.0 - std::pow(s.t, p / 2.0));
    return std::pow(s.big_c, p) * std::pow(sum_q, p / q) * sum_p;
}

} // namespace lindyn
