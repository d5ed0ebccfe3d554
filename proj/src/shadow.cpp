#include "lindyn/shadow.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace lindyn {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// T^{-1} on a finitely supported vector, dividing by exactly the weights the
/// support touches. The unstable side of a splitting may be invertible even
/// when the whole shift is not (a zero weight on the stable side), so this
/// deliberately skips apply_shift's global invertibility gate.
BiVector local_inverse(const WeightSequence& w, Direction dir, const BiVector& x) {
    BiVector out;
    for (const auto& [j, v] : x.entries()) {
        std::int64_t src = dir == Direction::forward ? j - 1 : j + 1;
        Complex wj = w.weight_at(src);
        if (wj == Complex(0.0, 0.0))
            throw std::domain_error("a zero weight blocks the inverse at index " +
                                    std::to_string(src));
        out.set(src, v / wj);
    }
    return out;
}

void check_pt_shape(std::int64_t n_min, std::int64_t n_max, std::size_t points,
                    std::size_t defects) {
    if (n_min > n_max || points != static_cast<std::size_t>(n_max - n_min + 1) ||
        defects + 1 != points)
        throw std::invalid_argument("pseudotrajectory window is inconsistent");
}

std::size_t anchor_slot(std::int64_t n_min, std::int64_t n_max) {
    return n_min <= 0 && 0 <= n_max ? static_cast<std::size_t>(-n_min) : 0;
}

} // namespace

ShiftShadowResult shadow(const ShiftOperator& op, const Splitting& s, const PseudoTrajectory& pt,
                         double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("shadowing needs tol > 0");
    if (s.kind != SplitKind::coordinate_cut)
        throw std::invalid_argument("a shift trajectory needs a coordinate-cut splitting");
    check_pt_shape(pt.n_min, pt.n_max, pt.points.size(), pt.defects.size());
    const std::size_t count = pt.points.size();

    std::vector<BiVector> y(count);
    if (!s.stable_is_nothing()) {
        BiVector y1; // zero at n_min; forward sum of T^k z^{(1)}
        for (std::size_t i = 0; i + 1 < count; ++i) {
            y1 = op.apply(y1) + stable_part(s, pt.defects[i]);
            y[i + 1] += y1;
        }
    }
    if (!s.stable_is_everything()) {
        BiVector y2; // zero at n_max; backward solve through the unstable side
        for (std::size_t i = count - 1; i-- > 0;) {
            y2 = local_inverse(op.weights, op.direction, y2 - unstable_part(s, pt.defects[i]));
            y[i] += y2;
        }
    }

    ShiftShadowResult res;
    res.n_min = pt.n_min;
    res.n_max = pt.n_max;
    res.truncation_tol = tol;
    res.bound_k = shadow_constant(s);
    res.errors.reserve(count);
    for (const auto& v : y) {
        double nrm = vector_norm(v, op.space);
        res.errors.push_back(nrm);
        res.sup_error = std::max(res.sup_error, nrm);
    }
    for (std::size_t i = 0; i + 1 < count; ++i) {
        BiVector r = y[i + 1] - op.apply(y[i]) - pt.defects[i];
        res.recurrence_residual =
            std::max(res.recurrence_residual, vector_norm(r, op.space));
    }
    const std::size_t ia = anchor_slot(pt.n_min, pt.n_max);
    res.base_point = pt.points[ia] - y[ia];
    res.corrections = std::move(y);
    res.certified = res.sup_error <= res.bound_k * pt.delta + tol;
    return res;
}

MatrixShadowResult shadow(const MatrixOp& a, const Splitting& s,
                          const MatrixPseudoTrajectory& pt, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("shadowing needs tol > 0");
    if (s.kind != SplitKind::spectral || !s.spectral)
        throw std::invalid_argument("a matrix trajectory needs a spectral splitting");
    check_pt_shape(pt.n_min, pt.n_max, pt.points.size(), pt.defects.size());
    const SpectralSplit& sp = *s.spectral;
    if (sp.stable_dim() + sp.unstable_dim() != a.dim())
        throw std::invalid_argument("splitting dimension does not match the operator");
    const std::size_t count = pt.points.size();
    const auto k = a.dim();
    const auto sdim = sp.stable_dim();
    const auto udim = sp.unstable_dim();

    // The series run in block coordinates: A W_s = W_s S and A W_u = W_u U
    // with orthonormal W columns, so the unstable directions cannot
    // contaminate the forward sweep at all (and vice versa).
    Eigen::MatrixXcd b(k, k);
    if (sdim > 0) b.leftCols(sdim) = sp.stable_basis;
    if (udim > 0) b.rightCols(udim) = sp.unstable_basis;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_b(b);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_u;
    if (udim > 0) lu_u.compute(sp.unstable_block);

    std::vector<Eigen::VectorXcd> y(count, Eigen::VectorXcd::Zero(k));
    if (sdim > 0) {
        Eigen::VectorXcd a1 = Eigen::VectorXcd::Zero(sdim);
        for (std::size_t i = 0; i + 1 < count; ++i) {
            Eigen::VectorXcd coords = lu_b.solve(pt.defects[i]);
            a1 = sp.stable_block * a1 + coords.head(sdim);
            y[i + 1] += sp.stable_basis * a1;
        }
    }
    if (udim > 0) {
        Eigen::VectorXcd b2 = Eigen::VectorXcd::Zero(udim);
        for (std::size_t i = count - 1; i-- > 0;) {
            Eigen::VectorXcd coords = lu_b.solve(pt.defects[i]);
            b2 = lu_u.solve(b2 - coords.tail(udim));
            y[i] += sp.unstable_basis * b2;
        }
    }

    MatrixShadowResult res;
    res.n_min = pt.n_min;
    res.n_max = pt.n_max;
    res.truncation_tol = tol;
    res.bound_k = shadow_constant(s);
    res.errors.reserve(count);
    for (const auto& v : y) {
        double nrm = v.norm();
        res.errors.push_back(nrm);
        res.sup_error = std::max(res.sup_error, nrm);
    }
    for (std::size_t i = 0; i + 1 < count; ++i) {
        double r = (y[i + 1] - a.entries() * y[i] - pt.defects[i]).norm();
        res.recurrence_residual = std::max(res.recurrence_residual, r);
    }
    const std::size_t ia = anchor_slot(pt.n_min, pt.n_max);
    res.base_point = pt.points[ia] - y[ia];
    res.corrections = std::move(y);
    res.certified = res.sup_error <= res.bound_k * pt.delta + tol;
    return res;
}

ShiftProfileResult shadow_profile(const ShiftOperator& op, const Splitting& s,
                                  DefectProfile profile, double p, const PseudoTrajectory& pt,
                                  double tol) {
    if (profile == DefectProfile::p_summable && !(p >= 1.0))
        throw std::invalid_argument("p_summable profiles need p >= 1");

    // both profiles force the defects to die out toward the window edges
    double peak = 0.0;
    for (double nrm : pt.defect_norms) peak = std::max(peak, nrm);
    std::int64_t extent = std::max(std::llabs(pt.n_min), std::llabs(pt.n_max));
    double edge_max = 0.0;
    for (std::size_t i = 0; i < pt.defect_norms.size(); ++i) {
        std::int64_t n = pt.n_min + static_cast<std::int64_t>(i);
        if (3 * std::llabs(n) >= 2 * extent) edge_max = std::max(edge_max, pt.defect_norms[i]);
    }
    if (edge_max > 0.0 && 2.0 * edge_max >= peak)
        throw std::domain_error(
            "the supplied defects do not die out toward the window edges; the declared "
            "profile is violated (edge max " +
            fmt(edge_max) + " vs peak " + fmt(peak) + ")");

    ShiftProfileResult out;
    out.run = shadow(op, s, pt, tol);
    ProfileCertificate& c = out.certificate;
    c.profile = profile;
    if (profile == DefectProfile::p_summable) {
        c.p = p;
        c.lp_constant = shadow_constant_lp(s, p);
        for (std::size_t i = 0; i < pt.defects.size(); ++i) {
            c.stable_sum_z += std::pow(vector_norm(stable_part(s, pt.defects[i]), op.space), p);
            c.unstable_sum_z +=
                std::pow(vector_norm(unstable_part(s, pt.defects[i]), op.space), p);
        }
        for (const auto& v : out.run.corrections) {
            c.stable_sum_y += std::pow(vector_norm(stable_part(s, v), op.space), p);
            c.unstable_sum_y += std::pow(vector_norm(unstable_part(s, v), op.space), p);
        }
        c.holds = c.stable_sum_y <= c.lp_constant * c.stable_sum_z + tol &&
                  c.unstable_sum_y <= c.lp_constant * c.unstable_sum_z + tol;
        c.detail = "window sums per component: stable " + fmt(c.stable_sum_y) + " vs " +
                   fmt(c.lp_constant * c.stable_sum_z) + ", unstable " + fmt(c.unstable_sum_y) +
                   " vs " + fmt(c.lp_constant * c.unstable_sum_z);
    } else {
        double k_sup = shadow_constant(s);
        c.worst_margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < out.run.corrections.size(); ++i) {
            std::int64_t n = pt.n_min + static_cast<std::int64_t>(i);
            double far = 0.0; // sup of ||z_m|| over |m| >= |n| / 2
            for (std::size_t jz = 0; jz < pt.defect_norms.size(); ++jz) {
                std::int64_t m = pt.n_min + static_cast<std::int64_t>(jz);
                if (2 * std::llabs(m) >= std::llabs(n)) far = std::max(far, pt.defect_norms[jz]);
            }
            double tail_pow = std::max(0.0, std::llabs(n) / 2.0 - 1.0);
            double env = k_sup * (far + std::pow(s.t, tail_pow) * pt.delta);
            c.worst_margin = std::min(c.worst_margin, env - out.run.errors[i]);
        }
        c.holds = c.worst_margin >= -tol;
        c.detail = "decaying envelope margin " + fmt(c.worst_margin);
    }
    return out;
}

namespace {

template <class Result, class Pt, class Apply, class Norm>
Result contraction_core(const Splitting& s, const Pt& pt, double eps, double p, Apply apply,
                        Norm norm) {
    bool fully_stable = s.kind == SplitKind::spectral
                            ? s.spectral && s.spectral->unstable_dim() == 0
                            : s.stable_is_everything();
    if (!fully_stable)
        throw std::invalid_argument(
            "positive shadow contraction needs a fully stable splitting");
    if (pt.n_min != 0)
        throw std::invalid_argument("positive shadowing reads forward windows only");
    check_pt_shape(pt.n_min, pt.n_max, pt.points.size(), pt.defects.size());
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("lp certificates need p >= 1");

    Result out;
    ContractionCertificate& c = out.certificate;
    c.eps = eps;
    c.p = p;
    c.delta_cap = (1.0 - s.t) * eps / s.big_c;
    if (pt.delta > c.delta_cap)
        throw std::invalid_argument("defect size " + fmt(pt.delta) +
                                    " exceeds (1 - t) eps / C = " + fmt(c.delta_cap) +
                                    "; the contraction bound cannot reach eps");

    auto& run = out.run;
    run.n_min = pt.n_min;
    run.n_max = pt.n_max;
    run.bound_k = s.big_c / (1.0 - s.t);
    run.truncation_tol = 0.0;
    run.base_point = pt.points[0];
    // the shadow is the true orbit of x_0; a contraction damps roundoff, so
    // plain differencing against the recomputed orbit is well conditioned
    auto orbit = pt.points[0];
    run.corrections.reserve(pt.points.size());
    run.errors.reserve(pt.points.size());
    for (std::size_t i = 0; i < pt.points.size(); ++i) {
        if (i > 0) orbit = apply(orbit);
        auto diff = pt.points[i] - orbit;
        double nrm = norm(diff);
        run.corrections.push_back(std::move(diff));
        run.errors.push_back(nrm);
        run.sup_error = std::max(run.sup_error, nrm);
        if (i > 0) c.sum_error_p += std::pow(nrm, p);
    }
    c.sup_error = run.sup_error;
    c.sup_bound = s.big_c * pt.delta / (1.0 - s.t);
    c.tail_error = run.errors.back();
    double sum_z = 0.0;
    for (double nrm : pt.defect_norms) sum_z += std::pow(nrm, p);
    c.sum_bound_p = shadow_constant_lp(s, p) * sum_z;
    c.sup_ok = pt.delta == 0.0 ? run.sup_error == 0.0 : run.sup_error < c.sup_bound;
    c.sum_ok = c.sum_error_p <= c.sum_bound_p;
    run.certified = c.sup_ok;
    c.detail = "sup " + fmt(c.sup_error) + " vs C delta/(1-t) = " + fmt(c.sup_bound) +
               "; l" + fmt(p) + " sum " + fmt(c.sum_error_p) + " vs " + fmt(c.sum_bound_p);
    return out;
}

} // namespace

ShiftContractionResult positive_shadow_contraction(const ShiftOperator& op, const Splitting& s,
                                                   const PseudoTrajectory& pt, double eps,
                                                   double p) {
    if (s.kind != SplitKind::coordinate_cut)
        throw std::invalid_argument("a shift trajectory needs a coordinate-cut splitting");
    return contraction_core<ShiftContractionResult>(
        s, pt, eps, p, [&](const BiVector& v) { return op.apply(v); },
        [&](const BiVector& v) { return vector_norm(v, op.space); });
}

MatrixContractionResult positive_shadow_contraction(const MatrixOp& a, const Splitting& s,
                                                    const MatrixPseudoTrajectory& pt, double eps,
                                                    double p) {
    if (s.kind != SplitKind::spectral)
        throw std::invalid_argument("a matrix trajectory needs a spectral splitting");
    return contraction_core<MatrixContractionResult>(
        s, pt, eps, p,
        [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return a.entries() * v; },
        [](const Eigen::VectorXcd& v) { return v.norm(); });
}

LinearGrowthResult linear_growth_orbit(const ShiftOperator& op, const Splitting& s,
                                       const BiVector& y, double delta, std::int64_t n_min,
                                       std::int64_t n_max, double tol) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (n_min > 0 || n_max < 0) throw std::invalid_argument("the window must contain 0");
    if (n_min < 0 && !op.invertible())
        throw std::invalid_argument("a two-sided window needs an invertible shift");

    // orbit of y on [n_min, n_max + 1]; the extra step feeds the defects
    const auto count = static_cast<std::size_t>(n_max - n_min + 2);
    std::vector<BiVector> orb(count);
    const auto i0 = static_cast<std::size_t>(-n_min);
    orb[i0] = y;
    for (std::size_t i = i0; i + 1 < count; ++i) orb[i + 1] = op.apply(orb[i]);
    for (std::size_t i = i0; i-- > 0;) orb[i] = op.apply(orb[i + 1], true);
    for (std::size_t i = 0; i < count; ++i) {
        double nrm = vector_norm(orb[i], op.space);
        if (!(nrm > 1.0 && nrm < 3.0))
            throw std::domain_error(
                "the orbit of y leaves (1, 3) at n = " +
                std::to_string(n_min + static_cast<std::int64_t>(i)) + ": ||T^n y|| = " +
                fmt(nrm));
    }

    PseudoTrajectory pt;
    pt.n_min = n_min;
    pt.n_max = n_max;
    pt.points.resize(count - 1);
    pt.defects.resize(count - 2);
    for (std::size_t i = 0; i + 1 < count; ++i) {
        auto n = n_min + static_cast<std::int64_t>(i);
        pt.points[i] = Complex(static_cast<double>(n) * delta / 3.0, 0.0) * orb[i];
        if (n < n_max) pt.defects[i] = Complex(delta / 3.0, 0.0) * orb[i + 1];
    }
    pt.defect_norms.reserve(pt.defects.size());
    for (const auto& z : pt.defects) {
        double nrm = vector_norm(z, op.space);
        pt.defect_norms.push_back(nrm);
        pt.delta = std::max(pt.delta, nrm);
    }

    LinearGrowthResult out;
    out.run = shadow(op, s, pt, tol);
    out.base = out.run.base_point;

    // the shadow orbit inherits the linear growth, up to the K delta error
    out.worst_lower = std::numeric_limits<double>::infinity();
    out.worst_upper = std::numeric_limits<double>::infinity();
    BiVector cur = out.base;
    std::vector<double> base_norms(count - 1);
    base_norms[i0] = vector_norm(cur, op.space);
    BiVector fwd = cur;
    for (std::size_t i = i0; i + 1 < count - 1; ++i) {
        fwd = op.apply(fwd);
        base_norms[i + 1] = vector_norm(fwd, op.space);
    }
    BiVector bwd = cur;
    for (std::size_t i = i0; i-- > 0;) {
        bwd = op.apply(bwd, true);
        base_norms[i] = vector_norm(bwd, op.space);
    }
    for (std::size_t i = 0; i < count - 1; ++i) {
        auto n = n_min + static_cast<std::int64_t>(i);
        double lo = 0.9 * (std::llabs(n) * delta / 3.0 - 1.0);
        double hi = 1.1 * (std::llabs(n) * delta + 1.0);
        out.worst_lower = std::min(out.worst_lower, base_norms[i] - lo);
        out.worst_upper = std::min(out.worst_upper, hi - base_norms[i]);
    }
    out.bounds_hold = out.worst_lower >= 0.0 && out.worst_upper >= 0.0;
    out.detail = "shadow orbit norms track |n| delta / 3 with margins " + fmt(out.worst_lower) +
                 " and " + fmt(out.worst_upper);
    return out;
}

NormalShadowingDecision positive_shadowing_decision_normal(const MatrixOp& a,
                                                           std::int64_t window,
                                                           std::uint64_t seed) {
    if (!a.is_normal())
        throw std::invalid_argument(
            "the hyperbolicity criterion for positive shadowing needs a normal matrix");
    if (window < 1) throw std::invalid_argument("window must be >= 1");

    NormalShadowingDecision out;
    out.verdict = is_hyperbolic_matrix(a);
    if (out.verdict.value == Truth::True) {
        Splitting s = build_splitting(a);
        std::mt19937_64 rng(seed);
        Eigen::VectorXcd x0(a.dim());
        for (Eigen::Index i = 0; i < x0.size(); ++i) {
            double re = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
            double im = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
            x0(i) = Complex(re, im);
        }
        if (x0.norm() > 0.0) x0 /= x0.norm();
        const double delta = 0.01;
        const double tol = 1e-9;
        auto pt = generate_pseudotrajectory(a, x0, delta, 0, window, seed);
        auto run = shadow(a, s, pt, tol);
        ShadowRunSummary sum;
        sum.bound_k = run.bound_k;
        sum.delta = pt.delta;
        sum.sup_error = run.sup_error;
        sum.tol = tol;
        sum.certified = run.certified;
        sum.window = window;
        sum.seed = seed;
        out.certificate = sum;
    } else if (out.verdict.value == Truth::False) {
        out.refutation = refute_shadowing(a, window, false);
    }
    return out;
}

} // namespace lindyn
