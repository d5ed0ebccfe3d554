#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lindyn/bivector.hpp"
#include "lindyn/classifier.hpp"
#include "lindyn/matrix.hpp"
#include "lindyn/shift.hpp"

namespace lindyn {

enum class SplitKind { coordinate_cut, spectral };

/// No verified stable/unstable pair: the spectrum meets the unit circle, the
/// tails disagree with the required geometry, or a two-sided restriction
/// bound would need an inverse that does not exist. Carries the offending
/// eigenvalues (matrices) or tail geometric means (shifts) when known.
class NotSplittable : public std::runtime_error {
  public:
    explicit NotSplittable(const std::string& what, std::vector<Complex> offending = {})
        : std::runtime_error(what), offending_(std::move(offending)) {}
    const std::vector<Complex>& offending() const { return offending_; }

  private:
    std::vector<Complex> offending_;
};

/// Verified pair X = M (+) N with ||(T|_M)^n|| <= C t^n and
/// ||(T^{-1}|_N)^n|| <= C t^n for n = 1..n_check, plus the component
/// projection bound beta (exactly 1 for coordinate cuts in l_p and c0).
///
/// Coordinate cuts on a forward shift: M = {x : x_n = 0 for n < cut},
/// N = {x : x_n = 0 for n >= cut}; the forward shift moves support upward,
/// so T(M) <= M and T^{-1}(N) <= N hold structurally. Backward shifts move
/// support downward and flip the sides: stable_upper = false means
/// M = {x : x_n = 0 for n >= cut} and N its complement. The sentinels
/// everything_cut / nothing_cut encode M = X and M = {0}.
struct Splitting {
    SplitKind kind = SplitKind::coordinate_cut;
    std::int64_t cut = 0;
    bool stable_upper = true;
    double beta = 1.0;
    double big_c = 1.0;
    double t = 0.5;
    std::int64_t n_check = 1;
    std::string detail;
    std::optional<SpectralSplit> spectral;

    static constexpr std::int64_t everything_cut = INT64_MIN / 2;
    static constexpr std::int64_t nothing_cut = INT64_MAX / 2;

    bool stable_index(std::int64_t n) const {
        return stable_upper ? n >= cut : n < cut;
    }
    bool stable_is_everything() const {
        return cut == (stable_upper ? everything_cut : nothing_cut);
    }
    bool stable_is_nothing() const {
        return cut == (stable_upper ? nothing_cut : everything_cut);
    }
};

/// Component projections. Coordinate cuts restrict the support (exact);
/// spectral splittings apply the stored oblique projectors.
BiVector stable_part(const Splitting& s, const BiVector& x);
BiVector unstable_part(const Splitting& s, const BiVector& x);
Eigen::VectorXcd stable_part(const Splitting& s, const Eigen::VectorXcd& x);
Eigen::VectorXcd unstable_part(const Splitting& s, const Eigen::VectorXcd& x);

/// Coordinate-cut splitting from the weight description.
///
/// Preferred path: a pointwise cut c with |w_n| < 1 on the whole stable side
/// and |w_n| > 1 on the whole unstable side, giving C = 1 and t = the worst
/// single step, both exact. Fallback for tails that are only geometrically
/// contracting on average: cut beyond the core, t = per-period geometric
/// mean, C swept over window products against t^n.
///
/// Throws NotSplittable when a geometric mean lands in the dead band, the
/// tails contract the wrong way for the direction, or the unstable side
/// would need a non-invertible inverse.
Splitting build_splitting(const ShiftOperator& op, const ClassifierConfig& cfg = {});

/// Spectral splitting for matrices: verified hyperbolicity, then the Schur
/// based invariant pair with per-block power bounds. C = max block scale,
/// t = max block rate, beta = max projector norm.
Splitting build_splitting(const MatrixOp& a);

/// sup mode: K = 2 beta C / (1 - t).
double shadow_constant(const Splitting& s);

/// l_p mode, p > 1: K_p = C^p (sum t^{qk/2})^{p/q} (sum t^{pk/2}) with q the
/// conjugate exponent, bounding sum ||y_n||^p <= K_p sum ||z_n||^p per
/// component. p = 1 uses the direct bound C / (1 - t).
double shadow_constant_lp(const Splitting& s, double p);

} // namespace lindyn
