#include "lindyn/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lindyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Start-range sentinels meaning "no constraint"; kept a factor away from the
// int64 limits so window arithmetic cannot overflow.
constexpr std::int64_t kAllLo = std::numeric_limits<std::int64_t>::min() / 4;
constexpr std::int64_t kAllHi = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

void require_bilateral_invertible(const WeightSequence& w, const char* op) {
    if (w.support() != Support::bilateral)
        throw std::invalid_argument(std::string(op) + ": needs a bilateral shift");
    if (!w.invertible())
        throw std::invalid_argument(std::string(op) + ": needs invertible weights");
}

// log |w_1...w_n| (right ray) or log |w_{-n}...w_{-1}| (left ray); nullopt
// when a zero weight sits inside the range.
std::optional<double> ray_log(const WeightSequence& w, bool left, std::int64_t n) {
    auto ls = left ? w.cum_log_abs(-n, -1) : w.cum_log_abs(1, n);
    if (ls.zero_count > 0) return std::nullopt;
    return ls.log_sum;
}

// True when a zero weight lies on the given ray (zeros only live in the core).
bool ray_has_zero(const WeightSequence& w, bool left) {
    if (!w.has_zero_weight()) return false;
    std::int64_t lo = left ? w.core_start() : std::max<std::int64_t>(w.core_start(), 1);
    std::int64_t hi = left ? std::min<std::int64_t>(w.core_end(), -1) : w.core_end();
    if (lo > hi) return false;
    return w.cum_log_abs(lo, hi).zero_count > 0;
}

// First n <= horizon whose ray product (inverted if asked) reaches the target.
std::optional<Witness> ray_witness(const WeightSequence& w, bool left, bool invert,
                                   double target_log, std::int64_t horizon, const char* tag) {
    for (std::int64_t n = 1; n <= horizon; ++n) {
        auto lg = ray_log(w, left, n);
        if (!lg) return std::nullopt; // ray products collapsed to zero for good
        double v = invert ? -*lg : *lg;
        if (v >= target_log) {
            Witness ws;
            ws.tag = tag;
            ws.start = left ? -n : 1;
            ws.exponent = n;
            ws.log_product = *lg;
            return ws;
        }
    }
    return std::nullopt;
}

struct Extremes {
    double min_log = kInf;
    double max_log = -kInf;
    bool any_zero = false;
    bool any = false;
};

// Extremes of log |w_s ... w_{s+n-1}| over starts s in [a, b]. Periodic tails
// collapse the sweep to representatives: starts fully inside a tail repeat
// with that tail's period, so scanning core_start - n - 2L .. core_end + R + 1
// (plus two periods when the whole range sits inside one tail) sees every
// distinct product. The block family has no such collapse and is clamped to
// [-reach, reach]; callers must treat its result as a sampled bound.
Extremes window_extremes(const WeightSequence& w, std::int64_t n, std::int64_t a, std::int64_t b,
                         std::int64_t reach) {
    Extremes e;
    if (n <= 0 || a > b) return e;
    std::int64_t lo = a, hi = b;
    if (w.has_periodic_tails()) {
        std::int64_t L = w.has_left_tail() ? std::int64_t(w.left_period().size()) : 0;
        std::int64_t R = std::int64_t(w.right_period().size());
        std::int64_t left_edge = w.core_start() - n - 2 * L; // starts here are deep left
        std::int64_t right_edge = w.core_end() + R + 1;      // starts here are deep right
        if (b <= left_edge) {
            lo = std::max(a, b - 2 * L + 1); // fully left: one period of starts
        } else if (a >= right_edge) {
            hi = std::min(b, a + 2 * R - 1); // fully right: one period of starts
        } else {
            // straddling range: keep a full period of deep starts on each
            // side so every residue class of tail starts is represented
            lo = std::max(a, left_edge - 2 * L);
            hi = std::min(b, right_edge + 2 * R);
        }
    } else {
        lo = std::max(lo, -reach);
        hi = std::min(hi, reach);
    }
    lo = std::max(lo, w.domain_min());
    if (lo > hi) return e;
    for (std::int64_t s = lo; s <= hi; ++s) {
        auto ls = w.cum_log_abs(s, s + n - 1);
        e.any = true;
        if (ls.zero_count > 0) {
            e.any_zero = true;
            continue;
        }
        e.min_log = std::min(e.min_log, ls.log_sum);
        e.max_log = std::max(e.max_log, ls.log_sum);
    }
    return e;
}

std::string dead_band_detail(bool right_bad) {
    return std::string("tail geometric mean inside the dead band: ") +
           (right_bad ? "right" : "left");
}

} // namespace

GmSide gm_side(double log_gm, double tolerance) {
    if (log_gm == 0.0) return GmSide::exactly_one;
    if (std::abs(log_gm) <= tolerance) return GmSide::indeterminate;
    return log_gm > 0.0 ? GmSide::above_one : GmSide::below_one;
}

TailSummary tail_summary(const WeightSequence& w) {
    if (!w.has_periodic_tails())
        throw std::invalid_argument("tail_summary: weights have no periodic tails");
    TailSummary s;
    s.log_gm_right = w.log_gm_right();
    s.gm_right = std::exp(s.log_gm_right);
    if (auto lgl = w.log_gm_left()) {
        s.log_gm_left = *lgl;
        s.gm_left = std::exp(*lgl);
    }
    if (!w.core().empty()) {
        double mn = kInf, mx = 0.0;
        for (const auto& v : w.core().values) {
            double a = std::abs(v);
            mn = std::min(mn, a);
            mx = std::max(mx, a);
        }
        s.core_min = mn;
        s.core_max = mx;
    }
    return s;
}

Verdict classify_expansive_forward(const WeightSequence& w, const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "classify_expansive_forward");
    double logc = std::log(cfg.threshold_c);
    if (w.has_periodic_tails()) {
        GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
        GmSide l = gm_side(*w.log_gm_left(), cfg.gm_tolerance);
        // either criterion alone decides True, so check both before giving
        // up on a dead-band tail
        bool right_unbounded = r == GmSide::above_one;  // sup_n |w_1...w_n| = inf
        bool left_unbounded = l == GmSide::below_one;   // sup_n |w_{-n}...w_{-1}|^{-1} = inf
        if (right_unbounded || left_unbounded) {
            Verdict v = Verdict::exact(true, right_unbounded
                                                 ? "right ray products diverge"
                                                 : "left ray inverse products diverge");
            v.witness = ray_witness(w, !right_unbounded, !right_unbounded, logc, cfg.horizon,
                                    right_unbounded ? "right" : "left_inverse");
            return v;
        }
        if (r == GmSide::indeterminate || l == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon,
                                         dead_band_detail(r == GmSide::indeterminate));
        return Verdict::exact(false, "both ray criteria stay bounded");
    }
    if (auto ws = ray_witness(w, false, false, logc, cfg.horizon, "right"))
        return Verdict::witnessed_true(*ws, cfg.horizon, "right ray products reached threshold");
    if (auto ws = ray_witness(w, true, true, logc, cfg.horizon, "left_inverse"))
        return Verdict::witnessed_true(*ws, cfg.horizon,
                                       "left ray inverse products reached threshold");
    if (w.annotated("not_expansive")) return Verdict::annotated(false, "not_expansive");
    return Verdict::undetermined(cfg.horizon, "no ray witness within horizon");
}

Verdict classify_uniformly_expansive_forward(const WeightSequence& w,
                                             const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "classify_uniformly_expansive_forward");
    double logc = std::log(cfg.threshold_c);
    std::int64_t reach = cfg.horizon * 4 + 64;
    bool sampled = !w.has_periodic_tails();

    // first branch: every window of length n multiplies by >= c;
    // second branch: every window of length n multiplies by <= 1/c.
    auto plain_witness = [&](bool grows, const char* tag) -> std::optional<Witness> {
        for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
            auto e = window_extremes(w, n, kAllLo, kAllHi, reach);
            if (!e.any) continue;
            bool pass = grows ? (!e.any_zero && e.min_log >= logc) : (e.max_log <= -logc);
            if (pass) {
                Witness ws;
                ws.tag = tag;
                ws.exponent = n;
                ws.log_product = grows ? e.min_log : e.max_log;
                if (sampled) ws.note = "starts sampled in [-" + std::to_string(reach) + ", " +
                                       std::to_string(reach) + "]";
                return ws;
            }
        }
        return std::nullopt;
    };
    // third branch: windows starting at k >= 1 grow uniformly AND windows
    // ending at k <= -2 shrink uniformly.
    auto third_witness = [&]() -> std::optional<Witness> {
        std::optional<std::int64_t> n_right, n_left;
        for (std::int64_t n = 1; n <= cfg.horizon && (!n_right || !n_left); ++n) {
            if (!n_right) {
                auto e = window_extremes(w, n, 1, kAllHi, reach);
                if (e.any && !e.any_zero && e.min_log >= logc) n_right = n;
            }
            if (!n_left) {
                auto e = window_extremes(w, n, kAllLo, -1 - n, reach);
                if (e.any && e.max_log <= -logc) n_left = n;
            }
        }
        if (!n_right || !n_left) return std::nullopt;
        Witness ws;
        ws.tag = "third";
        ws.exponent = std::max(*n_right, *n_left);
        ws.note = "right windows grow by n = " + std::to_string(*n_right) +
                  ", left windows shrink by n = " + std::to_string(*n_left);
        if (sampled) ws.note += "; starts sampled in [-" + std::to_string(reach) + ", " +
                                std::to_string(reach) + "]";
        return ws;
    };

    if (w.has_periodic_tails()) {
        GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
        GmSide l = gm_side(*w.log_gm_left(), cfg.gm_tolerance);
        auto poss = [](GmSide s, GmSide want) {
            return s == want || s == GmSide::indeterminate;
        };
        Verdict v;
        if (r == GmSide::above_one && l == GmSide::above_one) {
            v = Verdict::exact(true, "all long windows grow");
            v.branch = "first";
            v.witness = plain_witness(true, "first");
        } else if (r == GmSide::below_one && l == GmSide::below_one) {
            v = Verdict::exact(true, "all long windows shrink, so the inverse expands");
            v.branch = "second";
            v.witness = plain_witness(false, "second");
        } else if (r == GmSide::above_one && l == GmSide::below_one) {
            v = Verdict::exact(true, "right windows grow and left windows shrink");
            v.branch = "third";
            v.witness = third_witness();
        } else if ((poss(r, GmSide::above_one) && poss(l, GmSide::above_one)) ||
                   (poss(r, GmSide::below_one) && poss(l, GmSide::below_one)) ||
                   (poss(r, GmSide::above_one) && poss(l, GmSide::below_one))) {
            // a dead-band tail leaves some branch open
            return Verdict::undetermined(cfg.horizon,
                                         dead_band_detail(r == GmSide::indeterminate));
        } else {
            v = Verdict::exact(false, "window growth splits the wrong way");
            v.branch = "none";
            return v;
        }
        v.branches = {v.branch};
        return v;
    }
    if (w.annotated("not_uniformly_expansive")) {
        Verdict v = Verdict::annotated(false, "not_uniformly_expansive");
        v.branch = "none";
        return v;
    }
    if (auto ws = plain_witness(true, "first")) {
        Verdict v = Verdict::witnessed_true(*ws, cfg.horizon, "all sampled windows grow");
        v.branch = "first";
        v.branches = {"first"};
        return v;
    }
    if (auto ws = plain_witness(false, "second")) {
        Verdict v = Verdict::witnessed_true(*ws, cfg.horizon, "all sampled windows shrink");
        v.branch = "second";
        v.branches = {"second"};
        return v;
    }
    if (auto ws = third_witness()) {
        Verdict v = Verdict::witnessed_true(*ws, cfg.horizon,
                                            "sampled windows split into growth and decay rays");
        v.branch = "third";
        v.branches = {"third"};
        return v;
    }
    Verdict v = Verdict::undetermined(cfg.horizon, "no branch witnessed within horizon");
    v.branch = "none";
    return v;
}

Verdict classify_positively_expansive(const WeightSequence& w, const ClassifierConfig& cfg,
                                      Direction dir, bool inverse) {
    if (inverse && !w.invertible())
        throw std::invalid_argument("classify_positively_expansive: inverse needs invertibility");
    if (w.support() == Support::unilateral && dir == Direction::backward)
        return Verdict::exact(false, "unilateral backward shift annihilates the first basis vector");
    double logc = std::log(cfg.threshold_c);

    // Forward shifts need every weight nonzero; the bilateral backward shift
    // only needs w_j != 0 for j >= 0 (zeros below kill nothing it keeps).
    if (!inverse && w.has_zero_weight()) {
        bool fatal = dir == Direction::forward;
        if (!fatal) {
            std::int64_t lo = std::max<std::int64_t>(w.core_start(), 0);
            fatal = lo <= w.core_end() && w.cum_log_abs(lo, w.core_end()).zero_count > 0;
        }
        if (fatal) return Verdict::exact(false, "a zero weight flattens some orbit");
    }

    bool left = dir == Direction::backward;
    if (inverse) left = !left; // inverses read the opposite ray
    if (ray_has_zero(w, left))
        return Verdict::exact(false, "a zero weight caps the ray products");

    const char* tag = left ? "left" : "right";
    if (w.has_periodic_tails()) {
        double lg = left ? *w.log_gm_left() : w.log_gm_right();
        GmSide side = gm_side(lg, cfg.gm_tolerance);
        if (side == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon, dead_band_detail(!left));
        GmSide want = inverse ? GmSide::below_one : GmSide::above_one;
        if (side == want) {
            Verdict v = Verdict::exact(true, inverse ? "ray inverse products diverge"
                                                     : "ray products diverge");
            v.witness = ray_witness(w, left, inverse, logc, cfg.horizon, tag);
            return v;
        }
        return Verdict::exact(false, inverse ? "ray inverse products stay bounded"
                                             : "ray products stay bounded");
    }
    if (auto ws = ray_witness(w, left, inverse, logc, cfg.horizon, tag))
        return Verdict::witnessed_true(*ws, cfg.horizon, "ray products reached threshold");
    if (w.annotated("not_positively_expansive"))
        return Verdict::annotated(false, "not_positively_expansive");
    return Verdict::undetermined(cfg.horizon, "no ray witness within horizon");
}

Verdict classify_uniformly_positively_expansive(const WeightSequence& w,
                                                const ClassifierConfig& cfg, Direction dir,
                                                bool inverse) {
    if (inverse && !w.invertible())
        throw std::invalid_argument(
            "classify_uniformly_positively_expansive: inverse needs invertibility");
    if (w.support() == Support::unilateral && dir == Direction::backward)
        return Verdict::exact(false, "unilateral backward shift annihilates the first basis vector");
    if (!inverse && w.has_zero_weight())
        return Verdict::exact(false, "a zero weight pins the window infimum at zero");
    double logc = std::log(cfg.threshold_c);
    std::int64_t reach = cfg.horizon * 4 + 64;
    std::int64_t a = w.support() == Support::unilateral ? 1 : kAllLo;

    auto search = [&]() -> std::optional<Witness> {
        for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
            auto e = window_extremes(w, n, a, kAllHi, reach);
            if (!e.any) continue;
            bool pass = inverse ? e.max_log <= -logc : (!e.any_zero && e.min_log >= logc);
            if (pass) {
                Witness ws;
                ws.tag = inverse ? "sup_shrinks" : "inf_grows";
                ws.exponent = n;
                ws.log_product = inverse ? e.max_log : e.min_log;
                if (!w.has_periodic_tails())
                    ws.note = "starts sampled in [-" + std::to_string(reach) + ", " +
                              std::to_string(reach) + "]";
                return ws;
            }
        }
        return std::nullopt;
    };

    if (w.has_periodic_tails()) {
        GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
        GmSide l = w.has_left_tail() ? gm_side(*w.log_gm_left(), cfg.gm_tolerance) : r;
        if (r == GmSide::indeterminate || l == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon,
                                         dead_band_detail(r == GmSide::indeterminate));
        GmSide want = inverse ? GmSide::below_one : GmSide::above_one;
        if (r != want || l != want)
            return Verdict::exact(false, inverse ? "some long windows stay large"
                                                 : "some long windows stay small");
        Verdict v = Verdict::exact(true, inverse ? "all long windows shrink uniformly"
                                                 : "all long windows grow uniformly");
        v.witness = search();
        return v;
    }
    if (w.annotated("not_uniformly_positively_expansive"))
        return Verdict::annotated(false, "not_uniformly_positively_expansive");
    if (auto ws = search())
        return Verdict::witnessed_true(*ws, cfg.horizon, "sampled windows pass uniformly");
    return Verdict::undetermined(cfg.horizon, "no uniform window witness within horizon");
}

ShiftSpectralRadii shift_spectral_radii(const WeightSequence& w) {
    if (!w.has_periodic_tails())
        throw std::invalid_argument("shift_spectral_radii: weights have no periodic tails");
    ShiftSpectralRadii r;
    double lgr = w.log_gm_right();
    if (w.invertible()) {
        double lgl = *w.log_gm_left();
        r.r_fw = std::exp(std::max(lgl, lgr));
        r.r_fw_inv = std::exp(-std::min(lgl, lgr));
    } else {
        double lg = lgr;
        if (w.has_left_tail()) lg = std::max(lg, *w.log_gm_left());
        r.r_fw = std::exp(lg);
    }
    return r;
}

Verdict is_hyperbolic_shift(const WeightSequence& w, const ClassifierConfig& cfg) {
    if (!w.has_periodic_tails()) {
        if (w.annotated("not_hyperbolic")) return Verdict::annotated(false, "not_hyperbolic");
        if (w.annotated("hyperbolic")) return Verdict::annotated(true, "hyperbolic");
        return Verdict::undetermined(cfg.horizon, "no periodic tails and no annotation");
    }
    if (w.invertible()) {
        GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
        GmSide l = gm_side(*w.log_gm_left(), cfg.gm_tolerance);
        // annulus spectrum with radii gm_left, gm_right: hyperbolic iff the
        // unit circle misses [min, max]
        if (r == GmSide::exactly_one || l == GmSide::exactly_one)
            return Verdict::exact(false, "annulus spectrum meets the unit circle");
        if (r == GmSide::above_one && l == GmSide::below_one)
            return Verdict::exact(false, "annulus spectrum straddles the unit circle");
        if (r == GmSide::below_one && l == GmSide::above_one)
            return Verdict::exact(false, "annulus spectrum straddles the unit circle");
        if (r == GmSide::indeterminate || l == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon,
                                         dead_band_detail(r == GmSide::indeterminate));
        return Verdict::exact(true, "annulus spectrum avoids the unit circle");
    }
    // not invertible: spectrum is a full disc, so only a contraction escapes
    double lg = w.log_gm_right();
    if (w.has_left_tail() && w.log_gm_left()) lg = std::max(lg, *w.log_gm_left());
    GmSide s = gm_side(lg, cfg.gm_tolerance);
    if (s == GmSide::indeterminate)
        return Verdict::undetermined(cfg.horizon, "disc radius inside the dead band");
    return Verdict::exact(s == GmSide::below_one,
                          s == GmSide::below_one ? "disc spectrum stays inside the unit circle"
                                                 : "disc spectrum covers part of the unit circle");
}

Verdict hypercyclicity_check(const WeightSequence& w, const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "hypercyclicity_check");
    double log_eta = std::log(cfg.eta);
    Witness ws;
    ws.tag = "per_q";
    bool all_q = true;
    for (std::int64_t q = 1; q <= cfg.q_max; ++q) {
        bool found = false;
        for (std::int64_t n = q + 1; n <= cfg.horizon; ++n) {
            double term1 = -w.cum_log_abs(1, n + q).log_sum;     // 1 / |w_1...w_{n+q}|
            double term2 = w.cum_log_abs(-n + q + 1, 0).log_sum; // |w_0 ... w_{-n+q+1}|
            if (std::max(term1, term2) <= log_eta) {
                ws.pairs.emplace_back(q, n);
                found = true;
                break;
            }
        }
        if (!found) {
            all_q = false;
            break;
        }
    }
    if (all_q && !ws.pairs.empty())
        return Verdict::witnessed_true(ws, cfg.horizon,
                                       "both terms drop below eta for every shift q");
    if (w.has_periodic_tails()) {
        GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
        GmSide l = gm_side(*w.log_gm_left(), cfg.gm_tolerance);
        if (r == GmSide::below_one || r == GmSide::exactly_one)
            return Verdict::exact(false, "right products stay bounded, first term never decays");
        if (l == GmSide::above_one || l == GmSide::exactly_one)
            return Verdict::exact(false, "left products stay bounded below, second term never decays");
        return Verdict::undetermined(cfg.horizon, "tail geometric means leave both terms open");
    }
    if (w.annotated("not_hypercyclic")) return Verdict::annotated(false, "not_hypercyclic");
    return Verdict::undetermined(cfg.horizon, "no (q, n) witness within horizon");
}

Magnitude supercyclicity_ratio(const WeightSequence& w, std::int64_t n, std::int64_t q) {
    if (w.support() != Support::bilateral)
        throw std::invalid_argument("supercyclicity_ratio: needs a bilateral shift");
    if (n <= q) throw std::invalid_argument("supercyclicity_ratio: needs n > q");
    auto num = w.cum_log_abs(-n + q + 1, 0);
    auto den = w.cum_log_abs(1, n + q);
    if (den.zero_count > 0)
        throw std::domain_error("supercyclicity_ratio: zero weight in the denominator");
    if (num.zero_count > 0) return Magnitude::zero();
    return Magnitude::from_log(num.log_sum - den.log_sum);
}

Verdict supercyclicity_check(const WeightSequence& w, const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "supercyclicity_check");
    double log_eta = std::log(cfg.eta);
    Witness ws;
    ws.tag = "per_q";
    bool all_q = true;
    for (std::int64_t q = 1; q <= cfg.q_max; ++q) {
        bool found = false;
        for (std::int64_t n = q + 1; n <= cfg.horizon; ++n) {
            double ratio = w.cum_log_abs(-n + q + 1, 0).log_sum - w.cum_log_abs(1, n + q).log_sum;
            if (ratio <= log_eta) {
                ws.pairs.emplace_back(q, n);
                found = true;
                break;
            }
        }
        if (!found) {
            all_q = false;
            break;
        }
    }
    if (all_q && !ws.pairs.empty())
        return Verdict::witnessed_true(ws, cfg.horizon,
                                       "product ratio drops below eta for every shift q");
    if (w.has_periodic_tails()) {
        // per-step drift of log(ratio): numerator gains a left-tail factor,
        // denominator a right-tail factor
        double rate = *w.log_gm_left() - w.log_gm_right();
        GmSide side = gm_side(rate, cfg.gm_tolerance);
        if (side == GmSide::above_one)
            return Verdict::exact(false, "product ratio diverges");
        if (side == GmSide::exactly_one)
            return Verdict::exact(false, "product ratio is asymptotically flat");
        if (side == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon, "ratio drift inside the dead band");
        return Verdict::undetermined(cfg.horizon, "ratio decays but missed eta within horizon");
    }
    if (w.annotated("not_supercyclic")) return Verdict::annotated(false, "not_supercyclic");
    return Verdict::undetermined(cfg.horizon, "no (q, n) witness within horizon");
}

Verdict frequent_hc_check(const WeightSequence& w, const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "frequent_hc_check");
    // forward orbits must decay (right products shrink) and inverse orbits
    // must decay (left products grow)
    GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
    if (r == GmSide::above_one || r == GmSide::exactly_one)
        return Verdict::exact(false, "forward orbit norms do not decay");
    auto lgl = w.log_gm_left();
    if (lgl) {
        GmSide l = gm_side(*lgl, cfg.gm_tolerance);
        if (l == GmSide::below_one || l == GmSide::exactly_one)
            return Verdict::exact(false, "inverse orbit norms do not decay");
        if (l == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon, dead_band_detail(false));
    }
    if (r == GmSide::indeterminate)
        return Verdict::undetermined(cfg.horizon, dead_band_detail(true));
    if (!lgl)
        return Verdict::undetermined(cfg.horizon, "left tail has no geometric mean");

    // gm_right < 1 < gm_left: both orbit families decay geometrically. Spot
    // check the per-period decrements on canonical vectors before certifying.
    std::int64_t pr = std::int64_t(w.right_period().size());
    std::int64_t pl = std::int64_t(w.left_period().size());
    for (std::int64_t j = -cfg.fhc_j_max; j <= cfg.fhc_j_max; ++j) {
        std::int64_t burn = iabs(j) + iabs(w.core_start()) + iabs(w.core_end()) + 2;
        // forward: log ||F^n e_j|| = cum(j, j + n - 1)
        double f0 = w.cum_log_abs(j, j + burn - 1).log_sum;
        double f1 = w.cum_log_abs(j, j + burn + pr - 1).log_sum;
        if (f1 - f0 > pr * w.log_gm_right() + 1e-9)
            return Verdict::undetermined(cfg.horizon, "forward decay spot check failed");
        // inverse: log ||F^{-n} e_j|| = -cum(j - n, j - 1)
        double b0 = -w.cum_log_abs(j - burn, j - 1).log_sum;
        double b1 = -w.cum_log_abs(j - burn - pl, j - 1).log_sum;
        if (b1 - b0 > -pl * *lgl + 1e-9)
            return Verdict::undetermined(cfg.horizon, "inverse decay spot check failed");
    }
    Witness ws;
    ws.tag = "geometric_decay";
    ws.log_product = w.log_gm_right();
    ws.note = "per-step rates: forward " + std::to_string(std::exp(w.log_gm_right())) +
              ", inverse " + std::to_string(std::exp(-*lgl));
    return Verdict::witnessed_true(ws, cfg.horizon,
                                   "orbits of all basis vectors decay both ways");
}

HyponormalReport hyponormal_expansive_check(const WeightSequence& w,
                                            const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "hyponormal_expansive_check");
    HyponormalReport rep;
    if (!w.has_periodic_tails()) {
        // block families alternate large and small runs, so moduli step down
        rep.hyponormal = false;
    } else {
        auto constant_modulus = [](const std::vector<Complex>& p) {
            for (const auto& v : p)
                if (std::abs(v) != std::abs(p[0])) return false;
            return true;
        };
        bool ok = constant_modulus(w.left_period()) && constant_modulus(w.right_period());
        if (ok) {
            // periods are flat, so monotonicity only needs a scan across the
            // core plus one period of overhang on each side
            std::int64_t lo = w.core_start() - std::int64_t(w.left_period().size()) - 1;
            std::int64_t hi = w.core_end() + std::int64_t(w.right_period().size()) + 1;
            for (std::int64_t i = lo; i < hi && ok; ++i)
                ok = std::abs(w.weight_at(i)) <= std::abs(w.weight_at(i + 1));
        }
        rep.hyponormal = ok;
    }
    auto has_unit = [](const std::vector<Complex>& vs) {
        for (const auto& v : vs)
            if (std::abs(v) == 1.0) return true;
        return false;
    };
    rep.unit_modulus_weight = has_unit(w.left_period()) || has_unit(w.right_period()) ||
                              has_unit(w.core().values);
    rep.expansive = classify_expansive_forward(w, cfg);
    rep.uniformly_expansive = classify_uniformly_expansive_forward(w, cfg);
    return rep;
}

std::optional<IrregularWitness> irregular_vector_probe(const WeightSequence& w, Direction dir,
                                                       const std::vector<BiVector>& candidates,
                                                       const SpaceSpec& space,
                                                       const ClassifierConfig& cfg) {
    double log_floor = std::log(cfg.probe_floor);
    double log_ceiling = std::log(cfg.probe_ceiling);

    // Per-step drift of log ||T^n x|| once the orbit support clears the core:
    // forward orbits ride the right tail, backward orbits the left. An exact
    // one-sided drift bounds where new extremes can appear.
    std::optional<double> drift =
        dir == Direction::forward ? std::optional<double>(w.log_gm_right()) : w.log_gm_left();

    std::int64_t period = std::int64_t(
        std::max<std::size_t>(std::max(w.left_period().size(), w.right_period().size()), 1));

    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        const auto& x = candidates[ci];
        if (x.empty()) continue;

        std::int64_t n_clear = dir == Direction::forward
                                   ? std::max<std::int64_t>(1, w.core_end() + 1 - x.min_index())
                                   : std::max<std::int64_t>(1, x.max_index() - w.core_start() + 1);
        std::int64_t burn = n_clear + 4 * period + 16;

        // which extremes can still appear after burn-in
        bool low_late = true, high_late = true;
        if (drift) {
            if (*drift == 0.0) {
                low_late = high_late = false; // bounded ripple
            } else if (*drift > cfg.gm_tolerance) {
                low_late = false; // norms climb, lows are early
            } else if (*drift < -cfg.gm_tolerance) {
                high_late = false; // norms sink, highs are early
            }
        }

        IrregularWitness wit;
        wit.candidate = ci;
        bool found_low = false, found_high = false;
        bool dead = false;
        constexpr std::int64_t kChunk = 2048;
        for (std::int64_t base = 1; base <= cfg.probe_horizon && !dead; base += kChunk) {
            std::int64_t top = std::min(cfg.probe_horizon, base + kChunk - 1);
            auto pts = orbit_norms(w, x, space, base, top, dir);
            for (const auto& [n, mag] : pts) {
                double lg = mag.is_zero() ? -kInf : mag.log_abs();
                if (!found_low && lg <= log_floor) {
                    found_low = true;
                    wit.n_low = n;
                    wit.log_norm_low = lg;
                }
                if (!found_high && lg >= log_ceiling) {
                    found_high = true;
                    wit.n_high = n;
                    wit.log_norm_high = lg;
                }
                if (found_low && found_high) break;
                if (mag.is_zero()) {
                    dead = true; // orbit died; no new highs can appear
                    break;
                }
            }
            if (found_low && found_high) break;
            if (top >= burn) {
                if (!found_low && !low_late) break;
                if (!found_high && !high_late) break;
            }
        }
        if (found_low && found_high) return wit;
    }
    return std::nullopt;
}

Verdict ne0_growth_probe(const WeightSequence& w, const ClassifierConfig& cfg) {
    require_bilateral_invertible(w, "ne0_growth_probe");
    double log_target = std::log(cfg.probe_ceiling);

    // growth functional: n * ||F^n e_0|| forward, n * ||F^{-n} e_0|| backward
    auto forward_log = [&](std::int64_t n) {
        return std::log(double(n)) + w.cum_log_abs(0, n - 1).log_sum;
    };
    auto backward_log = [&](std::int64_t n) {
        return std::log(double(n)) - w.cum_log_abs(-n, -1).log_sum;
    };
    auto witness_scan = [&]() -> std::optional<Witness> {
        for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
            if (forward_log(n) >= log_target) {
                Witness ws;
                ws.tag = "forward";
                ws.exponent = n;
                ws.log_product = w.cum_log_abs(0, n - 1).log_sum;
                return ws;
            }
            if (backward_log(n) >= log_target) {
                Witness ws;
                ws.tag = "backward";
                ws.exponent = n;
                ws.log_product = -w.cum_log_abs(-n, -1).log_sum;
                return ws;
            }
        }
        return std::nullopt;
    };

    if (w.has_periodic_tails()) {
        GmSide r = gm_side(w.log_gm_right(), cfg.gm_tolerance);
        GmSide l = gm_side(*w.log_gm_left(), cfg.gm_tolerance);
        // the linear factor wins whenever either tail fails to fight it
        // strictly, so unboundedness is decided one side at a time
        if (r == GmSide::above_one || r == GmSide::exactly_one ||
            l == GmSide::below_one || l == GmSide::exactly_one) {
            Verdict v = Verdict::exact(true, "the growth functional is unbounded");
            v.witness = witness_scan();
            return v;
        }
        if (r == GmSide::indeterminate || l == GmSide::indeterminate)
            return Verdict::undetermined(cfg.horizon,
                                         dead_band_detail(r == GmSide::indeterminate));
        // bounded: both tails decay strictly against the linear factor;
        // safeguard that the functional is descending by the horizon
        std::int64_t p =
            std::int64_t(std::max(w.left_period().size(), w.right_period().size()));
        std::int64_t h = std::max<std::int64_t>(cfg.horizon, 4 * p + 16);
        if (forward_log(h) > forward_log(h - p) || backward_log(h) > backward_log(h - p))
            return Verdict::undetermined(cfg.horizon, "tail sweep contradicts the closed form");
        return Verdict::exact(false, "the growth functional stays bounded both ways");
    }
    if (auto ws = witness_scan())
        return Verdict::witnessed_true(*ws, cfg.horizon, "growth functional passed the ceiling");
    return Verdict::undetermined(cfg.horizon, "no growth witness within horizon");
}

} // namespace lindyn
