#include "lindyn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lindyn {

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

MatrixOp::MatrixOp(Eigen::MatrixXcd entries, MatrixBands bands)
    : entries_(std::move(entries)), bands_(bands) {
    if (entries_.rows() != entries_.cols())
        throw std::invalid_argument("matrix operator must be square");
    if (entries_.rows() < 1 || entries_.rows() > 64)
        throw std::invalid_argument("matrix operator supports 1 <= dim <= 64");
    if (!entries_.allFinite())
        throw std::invalid_argument("matrix operator entries must be finite");
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(entries_);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("schur decomposition did not converge");
    schur_t_ = schur.matrixT();
    schur_q_ = schur.matrixU();
    eigenvalues_ = schur_t_.diagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(entries_);
    singular_values_ = svd.singularValues();
    const double f = entries_.norm();
    const double comm = (entries_ * entries_.adjoint() - entries_.adjoint() * entries_).norm();
    normal_ = comm <= bands_.eta_normal * std::max(f * f, 1.0);
}

MatrixOp MatrixOp::diagonal(const std::vector<std::complex<double>>& diag, MatrixBands bands) {
    const int k = static_cast<int>(diag.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    return MatrixOp(std::move(m), bands);
}

MatrixOp MatrixOp::jordan_block(std::complex<double> lambda, int dim, MatrixBands bands) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = lambda;
    for (int i = 1; i < dim; ++i) m(i, i - 1) = 1.0;
    return MatrixOp(std::move(m), bands);
}

MatrixOp MatrixOp::rotation(double theta, MatrixBands bands) {
    Eigen::MatrixXcd m(2, 2);
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return MatrixOp(std::move(m), bands);
}

MatrixOp MatrixOp::identity(int dim, MatrixBands bands) {
    return MatrixOp(Eigen::MatrixXcd::Identity(dim, dim), bands);
}

Verdict is_hyperbolic_matrix(const MatrixOp& a) {
    return is_hyperbolic_matrix(a, a.bands().circle_band);
}

Verdict is_hyperbolic_matrix(const MatrixOp& a, double band) {
    const double on = a.bands().on_circle;
    double worst = std::numeric_limits<double>::infinity();
    std::complex<double> hit;
    bool banded = false;
    for (Eigen::Index i = 0; i < a.eigenvalues().size(); ++i) {
        const std::complex<double> lam = a.eigenvalues()(i);
        const double d = std::abs(std::abs(lam) - 1.0);
        if (d <= on)
            return Verdict::exact(false, "eigenvalue " + fmt(lam.real()) + (lam.imag() < 0 ? "-" : "+") +
                                             fmt(std::abs(lam.imag())) +
                                             "i sits on the unit circle at numeric precision");
        if (d <= band) {
            banded = true;
            hit = lam;
        }
        worst = std::min(worst, d);
    }
    if (banded)
        return Verdict::undetermined(0, "an eigenvalue modulus is within " + fmt(band) +
                                            " of the unit circle: |" + fmt(std::abs(hit)) + "|");
    return Verdict::exact(true, "spectrum clears the unit circle by " + fmt(worst));
}

namespace {

// exchanges the diagonal entries i, i+1 of the triangular factor by a unitary
// similarity; the rotation's first column is the in-plane eigenvector for the
// entry moving up
void swap_schur_adjacent(Eigen::MatrixXcd& t, Eigen::MatrixXcd& q, int i) {
    const std::complex<double> a = t(i, i);
    const std::complex<double> b = t(i, i + 1);
    const std::complex<double> c = t(i + 1, i + 1);
    Eigen::JacobiRotation<std::complex<double>> rot;
    rot.makeGivens(b, c - a);
    t.applyOnTheLeft(i, i + 1, rot.adjoint());
    t.applyOnTheRight(i, i + 1, rot);
    q.applyOnTheRight(i, i + 1, rot);
    t(i + 1, i) = 0.0;
}

// ||block^n|| <= scale * rate^n, proven by sweeping powers until
// ||block^m|| <= rate^m; from there submultiplicativity extends the prefix
// max. Candidates start at the spectral radius itself: exactly geometric
// blocks then pass at m = 1 with scale 1, and downstream constants stay
// exact. A tiny relative nudge rescues blocks that are geometric only up to
// rounding before real margin is spent.
PowerBound fit_power_bound(const Eigen::MatrixXcd& block, double spectral_radius,
                           const char* label) {
    const Eigen::Index k = block.rows();
    if (k == 0) return PowerBound{0.0, 0.0, 0};
    if (!(spectral_radius < 1.0))
        throw std::invalid_argument(std::string(label) + ": block spectral radius must be < 1");

    std::vector<double> rates;
    rates.push_back(spectral_radius);
    rates.push_back(spectral_radius + (1.0 - spectral_radius) * 0x1p-30);
    rates.push_back(spectral_radius + 0.25 * (1.0 - spectral_radius));
    for (double t = rates.back(); rates.size() < 12;) {
        t = 0.5 * (t + 1.0);
        rates.push_back(t);
    }

    const std::int64_t sweep_cap = 1024;
    for (double rate : rates) {
        if (!(rate < 1.0)) break;
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(k, k);
        double tpow = 1.0;
        double scale = 1.0;
        for (std::int64_t n = 1; n <= sweep_cap; ++n) {
            p = p * block;
            tpow *= rate;
            const double nrm = spectral_norm(p);
            if (nrm == 0.0) return PowerBound{scale, rate, n}; // nilpotent: bound is exact from here
            if (tpow < 1e-280 || nrm > 1e280) break;
            const double ratio = nrm / tpow;
            if (ratio <= 1.0) return PowerBound{scale, rate, n};
            scale = std::max(scale, ratio);
        }
    }
    throw std::runtime_error(std::string(label) +
                             ": no verified power bound; the spectral margin is too thin");
}

} // namespace

SpectralSplit hyperbolic_splitting(const MatrixOp& a) {
    const Verdict h = is_hyperbolic_matrix(a);
    if (h.value != Truth::True)
        throw std::invalid_argument("hyperbolic_splitting: " + h.detail);

    const int k = a.dim();
    Eigen::MatrixXcd t = a.schur_t();
    Eigen::MatrixXcd q = a.schur_q();
    std::vector<char> stable(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) stable[static_cast<std::size_t>(i)] = std::abs(t(i, i)) < 1.0;

    // bubble the stable cluster to the front; adjacent swaps keep both
    // factors unitary-similar to the input
    for (bool moved = true; moved;) {
        moved = false;
        for (int i = 0; i + 1 < k; ++i) {
            if (!stable[static_cast<std::size_t>(i)] && stable[static_cast<std::size_t>(i + 1)]) {
                swap_schur_adjacent(t, q, i);
                std::swap(stable[static_cast<std::size_t>(i)], stable[static_cast<std::size_t>(i + 1)]);
                moved = true;
            }
        }
    }

    const int s = static_cast<int>(std::count(stable.begin(), stable.end(), char(1)));
    const int u = k - s;

    SpectralSplit split;
    split.stable_basis = q.leftCols(s);

    // unstable invariant subspace: T11 X - X T22 = -T12 column by column,
    // each system upper triangular with diagonal t11_ii - t22_jj bounded away
    // from zero by the hyperbolic gap
    Eigen::MatrixXcd t11 = t.topLeftCorner(s, s);
    Eigen::MatrixXcd t12 = t.topRightCorner(s, u);
    Eigen::MatrixXcd t22 = t.bottomRightCorner(u, u);
    Eigen::MatrixXcd x(s, u);
    for (int j = 0; j < u; ++j) {
        Eigen::VectorXcd rhs = -t12.col(j);
        for (int m = 0; m < j; ++m) rhs += x.col(m) * t22(m, j);
        Eigen::MatrixXcd shifted = t11;
        shifted.diagonal().array() -= t22(j, j);
        x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    Eigen::MatrixXcd raw(k, u);
    raw.topRows(s) = x;
    raw.bottomRows(u) = Eigen::MatrixXcd::Identity(u, u);
    raw = q * raw;
    if (u > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
        split.unstable_basis = qr.householderQ() * Eigen::MatrixXcd::Identity(k, u);
    } else {
        split.unstable_basis = Eigen::MatrixXcd(k, 0);
    }

    split.stable_block = split.stable_basis.adjoint() * a.entries() * split.stable_basis;
    split.unstable_block = split.unstable_basis.adjoint() * a.entries() * split.unstable_basis;

    Eigen::MatrixXcd b(k, k);
    b.leftCols(s) = split.stable_basis;
    b.rightCols(u) = split.unstable_basis;
    Eigen::MatrixXcd binv = b.partialPivLu().inverse();
    split.p_stable = split.stable_basis * binv.topRows(s);
    split.p_unstable = split.unstable_basis * binv.bottomRows(u);
    split.beta = std::max(spectral_norm(split.p_stable), spectral_norm(split.p_unstable));
    if (s == 0) split.beta = spectral_norm(split.p_unstable);
    if (u == 0) split.beta = spectral_norm(split.p_stable);

    double rs = 0.0;
    split.stable_margin = 1.0;
    for (int i = 0; i < s; ++i) {
        const double m = std::abs(t(i, i));
        rs = std::max(rs, m);
        split.stable_margin = std::min(split.stable_margin, 1.0 - m);
    }
    double ru = 0.0;
    split.unstable_margin = std::numeric_limits<double>::infinity();
    for (int i = s; i < k; ++i) {
        const double m = std::abs(t(i, i));
        ru = std::max(ru, 1.0 / m);
        split.unstable_margin = std::min(split.unstable_margin, m - 1.0);
    }
    if (u == 0) split.unstable_margin = 1.0;

    split.stable_power =
        s > 0 ? fit_power_bound(split.stable_block, rs, "stable power bound") : PowerBound{};
    if (u > 0) {
        Eigen::MatrixXcd uinv = split.unstable_block.partialPivLu().inverse();
        split.unstable_power = fit_power_bound(uinv, ru, "unstable power bound");
    }

    // constructor-verified identities: the pieces reassemble the identity and
    // respect invariance, within the declared slack
    const double tol = a.bands().eta_proj * std::max(1.0, a.op_norm()) *
                       std::max(1.0, split.beta * split.beta);
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(k, k);
    if ((split.p_stable + split.p_unstable - eye).norm() > tol ||
        (split.p_stable * split.p_unstable).norm() > tol ||
        (split.p_unstable * a.entries() * split.p_stable).norm() > tol ||
        (split.p_stable * a.entries() * split.p_unstable).norm() > tol)
        throw std::runtime_error("hyperbolic_splitting: projection identities exceed the slack");
    return split;
}

namespace {

// dispatch shared by the "no value equals 1" verdicts: an exact hit decides
// False, a clear sweep decides True, anything merely inside the band stays
// Undetermined
Verdict none_equal_one(const std::vector<double>& values, double on, double band,
                       const char* hit_detail, const char* clear_detail) {
    bool banded = false;
    for (double v : values) {
        const double d = std::abs(v - 1.0);
        if (d <= on) return Verdict::exact(false, hit_detail);
        if (d <= band) banded = true;
    }
    if (banded) return Verdict::undetermined(0, "a spectral value is inside the dead band around 1");
    return Verdict::exact(true, clear_detail);
}

// "all values exceed 1": any value at or below 1 decides False
Verdict all_above_one(const std::vector<double>& values, double on, double band,
                      const char* low_detail, const char* hit_detail, const char* clear_detail) {
    bool banded = false;
    for (double v : values) {
        if (v - 1.0 < -band) return Verdict::exact(false, low_detail);
    }
    for (double v : values) {
        if (std::abs(v - 1.0) <= on) return Verdict::exact(false, hit_detail);
        if (std::abs(v - 1.0) <= band) banded = true;
    }
    if (banded) return Verdict::undetermined(0, "a spectral value is inside the dead band around 1");
    return Verdict::exact(true, clear_detail);
}

} // namespace

NormalExpansivityReport normal_expansive(const MatrixOp& a) {
    if (!a.is_normal())
        throw std::invalid_argument(
            "normal_expansive: operator is not normal at the configured tolerance; "
            "use the orbit probes instead");
    const double on = a.bands().on_circle;
    const double band = a.bands().circle_band;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.entries().adjoint() * a.entries());
    std::vector<double> mu(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> moduli;
    moduli.reserve(static_cast<std::size_t>(a.dim()));
    for (Eigen::Index i = 0; i < a.eigenvalues().size(); ++i)
        moduli.push_back(std::abs(a.eigenvalues()(i)));

    NormalExpansivityReport r;
    const bool invertible = a.min_singular_value() > on * std::max(1.0, a.op_norm());
    if (invertible) {
        r.expansive = none_equal_one(mu, on, band,
                                     "A*A fixes an eigenvector, so some orbit has constant norm",
                                     "no eigenvalue of A*A equals 1");
        r.uniformly_expansive = none_equal_one(moduli, on, band,
                                               "an eigenvalue modulus equals 1",
                                               "no eigenvalue modulus equals 1");
    } else {
        r.expansive = Verdict::undetermined(0, "two-sided orbits need an invertible operator");
        r.uniformly_expansive = r.expansive;
    }
    r.positively_expansive =
        all_above_one(mu, on, band,
                      "an eigenvalue of A*A below 1 gives a decaying orbit",
                      "an eigenvalue of A*A equal to 1 pins an orbit's norm",
                      "every spectral value of A*A exceeds 1");
    r.uniformly_positively_expansive =
        all_above_one(moduli, on, band,
                      "an eigenvalue modulus below 1 gives a non-growing direction",
                      "an eigenvalue modulus equal to 1 pins a direction",
                      "every eigenvalue modulus exceeds 1");
    return r;
}

CounterexampleCertificate fd1_counterexample(const MatrixOp& a, CounterexampleMode mode,
                                             std::int64_t window, double p, double delta) {
    if (window < 1) throw std::invalid_argument("fd1_counterexample: window must be >= 1");
    if (mode == CounterexampleMode::lp && !(p > 1.0))
        throw std::invalid_argument("fd1_counterexample: lp mode needs p > 1");
    if (mode == CounterexampleMode::positive && !(delta > 0.0))
        throw std::invalid_argument("fd1_counterexample: positive mode needs delta > 0");

    const int k = a.dim();
    const double row_tol = a.bands().on_circle * std::max(1.0, a.op_norm());
    int pivot = -1;
    std::complex<double> lambda;
    for (int i = 0; i < k && pivot < 0; ++i) {
        double off = 0.0;
        for (int j = 0; j < k; ++j)
            if (j != i) off = std::max(off, std::abs(a.entries()(i, j)));
        const std::complex<double> d = a.entries()(i, i);
        if (off <= row_tol && std::abs(std::abs(d) - 1.0) <= a.bands().circle_band) {
            pivot = i;
            lambda = d;
        }
    }
    if (pivot < 0)
        throw std::domain_error(
            "fd1_counterexample: no unimodular eigenvalue on a decoupled coordinate row");

    // work in the frame of A / lambda: the pivot row becomes exactly e_pivot,
    // so the pivot coordinate of every orbit is constant
    Eigen::MatrixXcd b = a.entries() / lambda;

    CounterexampleCertificate cert;
    cert.mode = mode;
    cert.p = p;
    cert.delta = delta;
    cert.pivot = pivot;
    cert.lambda = lambda;
    const std::size_t n_sz = static_cast<std::size_t>(window);
    cert.points.reserve(n_sz + 1);
    cert.defects.reserve(n_sz);
    cert.defect_norms.reserve(n_sz);
    cert.pivot_drift.reserve(n_sz + 1);

    Eigen::VectorXcd cur = Eigen::VectorXcd::Zero(k);
    cert.points.push_back(cur);
    cert.pivot_drift.push_back(0.0);
    double harmonic = 0.0;
    for (std::int64_t n = 0; n < window; ++n) {
        double target = 0.0;
        double increment = 0.0;
        switch (mode) {
            case CounterexampleMode::lp:
                increment = 1.0 / static_cast<double>(n + 1);
                harmonic += increment;
                target = harmonic;
                break;
            case CounterexampleMode::l1:
                target = 1.0 / static_cast<double>(n + 1);
                increment = n == 0 ? 1.0
                                   : -1.0 / static_cast<double>(n * (n + 1));
                break;
            case CounterexampleMode::positive:
                target = static_cast<double>(n + 1) * delta;
                increment = delta;
                break;
        }
        Eigen::VectorXcd next = b * cur;
        next(pivot) = target;
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(k);
        z(pivot) = increment; // the closed form, stored exactly
        cert.points.push_back(next);
        cert.pivot_drift.push_back(target);
        cert.defects.push_back(z);
        const double nrm = std::abs(increment);
        cert.defect_norms.push_back(nrm);
        cert.defect_sup = std::max(cert.defect_sup, nrm);
        cert.defect_power_sum +=
            mode == CounterexampleMode::lp ? std::pow(nrm, p) : nrm;
        cur = std::move(next);
    }

    if (mode == CounterexampleMode::l1) {
        // the window error functional is a sum; its exact minimum over base
        // points sits at a median of the drift values
        std::vector<double> sorted = cert.pivot_drift;
        std::sort(sorted.begin(), sorted.end());
        const double med = sorted[sorted.size() / 2];
        double total = 0.0;
        for (double v : cert.pivot_drift) total += std::abs(v - med);
        cert.divergence_minimax = total;
        cert.detail = "summed pivot error at the median base point " + fmt(med);
    } else {
        // sup functional over a monotone drift: the best base point sits
        // halfway up the ramp
        const double top = cert.pivot_drift.back();
        cert.divergence_minimax = 0.5 * top;
        cert.detail = "pivot drift reaches " + fmt(top) +
                      "; every base point pays at least half of it";
    }
    return cert;
}

RefutationCertificate refute_shadowing(const MatrixOp& a, std::int64_t window, bool two_sided) {
    if (window < 1) throw std::invalid_argument("refute_shadowing: window must be >= 1");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.entries());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("refute_shadowing: eigendecomposition did not converge");
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double d = std::abs(std::abs(es.eigenvalues()(i)) - 1.0);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    if (best_d > a.bands().on_circle)
        throw std::domain_error("refute_shadowing: no unimodular eigenvalue (nearest modulus " +
                                fmt(std::abs(es.eigenvalues()(best))) + ")");

    RefutationCertificate cert;
    cert.lambda = es.eigenvalues()(best);
    cert.direction = es.eigenvectors().col(best);
    cert.direction /= cert.direction.norm();
    cert.residual = (a.entries() * cert.direction - cert.lambda * cert.direction).norm();
    cert.window = window;
    cert.two_sided = two_sided;
    cert.defect_sup = 1.0;

    // the eigen-projection coefficient of any tracking orbit is n + c; the
    // sup of |n + c| over the window is minimized at the window midpoint
    const double lo = two_sided ? -static_cast<double>(window) : 0.0;
    const double hi = static_cast<double>(window);
    cert.lower_bound = 0.5 * (hi - lo);
    cert.detail = "unit defects along the eigendirection force corrections of size " +
                  fmt(cert.lower_bound) + " on [" + fmt(lo) + ", " + fmt(hi) + "]";
    return cert;
}

std::optional<IrregularWitness> irregular_vector_probe(const MatrixOp& a,
                                                       const std::vector<Eigen::VectorXcd>& candidates,
                                                       const ClassifierConfig& cfg) {
    const std::int64_t horizon = std::min<std::int64_t>(cfg.probe_horizon, 4096);
    const double lfloor = std::log(cfg.probe_floor);
    const double lceil = std::log(cfg.probe_ceiling);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Eigen::VectorXcd& x0 = candidates[c];
        if (x0.size() != a.dim())
            throw std::invalid_argument("irregular_vector_probe: candidate dimension mismatch");
        if (x0.norm() == 0.0) continue;
        Eigen::VectorXcd v = x0;
        std::optional<std::int64_t> n_low, n_high;
        double log_low = 0.0, log_high = 0.0;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            v = a.entries() * v;
            const double nrm = v.norm();
            if (nrm == 0.0) break;
            const double ln = std::log(nrm);
            if (!n_low && ln <= lfloor) {
                n_low = n;
                log_low = ln;
            }
            if (!n_high && ln >= lceil) {
                n_high = n;
                log_high = ln;
            }
            if (n_low && n_high) {
                IrregularWitness w;
                w.candidate = c;
                w.n_low = *n_low;
                w.log_norm_low = log_low;
                w.n_high = *n_high;
                w.log_norm_high = log_high;
                return w;
            }
            if (std::abs(ln) > 700.0) break;
        }
    }
    return std::nullopt;
}

} // namespace lindyn
