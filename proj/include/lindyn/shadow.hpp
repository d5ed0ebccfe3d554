#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lindyn/pseudo.hpp"
#include "lindyn/splitting.hpp"

namespace lindyn {

/// Solution of the shadowing difference equation y_{n+1} = T y_n + z_n on
/// the window, split per component: the stable series runs forward from
/// y = 0 at n_min, the unstable series backward from y = 0 at n_max, which
/// reproduces the two infinite series exactly because defects outside the
/// window are zero. base_point = x_anchor - y_anchor, and the error at n,
/// ||x_n - T^n base_point||, equals ||y_n|| by the telescoping identity
/// x_n - y_n = T^n(x_0 - y_0); it is reported from the corrections, whose
/// independent check is the recorded recurrence residual. Differencing
/// against a recomputed orbit instead would cancel catastrophically along
/// expanding directions.
template <class Vec>
struct ShadowResultT {
    Vec base_point;
    std::vector<Vec> corrections;
    std::vector<double> errors;
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    double bound_k = 0.0;
    double truncation_tol = 0.0;
    double sup_error = 0.0;
    double recurrence_residual = 0.0; // max ||y_{n+1} - T y_n - z_n|| over the window
    bool certified = false;

    const Vec& correction(std::int64_t n) const {
        if (n < n_min || n > n_max) throw std::out_of_range("index outside the window");
        return corrections[static_cast<std::size_t>(n - n_min)];
    }
    double error(std::int64_t n) const {
        if (n < n_min || n > n_max) throw std::out_of_range("index outside the window");
        return errors[static_cast<std::size_t>(n - n_min)];
    }
};

using ShiftShadowResult = ShadowResultT<BiVector>;
using MatrixShadowResult = ShadowResultT<Eigen::VectorXcd>;

/// certified <=> sup error <= shadow_constant(s) * pt.delta + tol.
ShiftShadowResult shadow(const ShiftOperator& op, const Splitting& s, const PseudoTrajectory& pt,
                         double tol);
MatrixShadowResult shadow(const MatrixOp& a, const Splitting& s,
                          const MatrixPseudoTrajectory& pt, double tol);

enum class DefectProfile { decaying, p_summable };

/// Evidence that the corrections inherit the declared defect profile on the
/// window: per-component l_p partial sums against the Holder constant, or a
/// decaying envelope K(sup_{|m| >= |n|/2} ||z_m|| + t^{|n|/2 - 1} delta).
struct ProfileCertificate {
    DefectProfile profile = DefectProfile::decaying;
    double p = 1.0;
    double lp_constant = 0.0;
    double stable_sum_y = 0.0;
    double stable_sum_z = 0.0;
    double unstable_sum_y = 0.0;
    double unstable_sum_z = 0.0;
    double worst_margin = 0.0; // min over n of envelope - ||y_n|| (decaying mode)
    bool holds = false;
    std::string detail;
};

struct ShiftProfileResult {
    ShiftShadowResult run;
    ProfileCertificate certificate;
};

/// Throws std::domain_error when the window's edge defects are too large
/// for the declared profile (a constant defect sequence is neither decaying
/// nor p-summable). p is read only for p_summable.
ShiftProfileResult shadow_profile(const ShiftOperator& op, const Splitting& s,
                                  DefectProfile profile, double p, const PseudoTrajectory& pt,
                                  double tol);

/// Forward-only shadowing by the true orbit of x_0 for contraction-type
/// operators (fully stable splitting). Requires pt.delta <= (1 - t) eps / C;
/// every error then stays below C delta / (1 - t) <= eps. Errors here ARE
/// computed by differencing the recomputed orbit: contractions damp the
/// roundoff, so the check is independent of the series solver.
struct ContractionCertificate {
    double eps = 0.0;
    double delta_cap = 0.0;  // (1 - t) eps / C
    double sup_error = 0.0;
    double sup_bound = 0.0;  // C delta / (1 - t)
    double tail_error = 0.0; // error at n_max, the limit-shadowing indicator
    double p = 1.0;
    double sum_error_p = 0.0;
    double sum_bound_p = 0.0;
    bool sup_ok = false;
    bool sum_ok = false;
    std::string detail;
};

struct ShiftContractionResult {
    ShiftShadowResult run;
    ContractionCertificate certificate;
};
struct MatrixContractionResult {
    MatrixShadowResult run;
    ContractionCertificate certificate;
};

ShiftContractionResult positive_shadow_contraction(const ShiftOperator& op, const Splitting& s,
                                                   const PseudoTrajectory& pt, double eps,
                                                   double p = 1.0);
MatrixContractionResult positive_shadow_contraction(const MatrixOp& a, const Splitting& s,
                                                    const MatrixPseudoTrajectory& pt, double eps,
                                                    double p = 1.0);

/// Builds the pseudotrajectory x_n = (n delta / 3) T^n y from a vector whose
/// orbit norms stay inside (1, 3) on the window, shadows it, and checks the
/// two-sided linear growth of the shadow orbit:
/// 0.9 (|n| delta / 3 - 1) <= ||T^n base|| <= 1.1 (|n| delta + 1).
struct LinearGrowthResult {
    BiVector base;
    ShiftShadowResult run;
    bool bounds_hold = false;
    double worst_lower = 0.0; // min of ||T^n base|| - lower bound
    double worst_upper = 0.0; // min of upper bound - ||T^n base||
    std::string detail;
};

LinearGrowthResult linear_growth_orbit(const ShiftOperator& op, const Splitting& s,
                                       const BiVector& y, double delta, std::int64_t n_min,
                                       std::int64_t n_max, double tol);

} // namespace lindyn
