#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindyn/classifier.hpp"
#include "lindyn/verdict.hpp"

namespace lindyn {

/// Dead zones for spectral decisions. The dichotomies under test are exact
/// statements about |lambda| against 1; floating point gets three regimes:
/// on the circle at numeric precision (exact False), too close to call
/// (Undetermined), and clear (exact True).
struct MatrixBands {
    double on_circle = 1e-14;  // | |lambda| - 1 | at numeric precision counts as on the circle
    double circle_band = 1e-9; // dead zone around the circle -> Undetermined
    double eta_normal = 1e-12; // normality: ||AA* - A*A||_F <= eta_normal * ||A||_F^2
    double eta_proj = 1e-10;   // splitting identity slack, relative to max(1, ||A||)
};

/// Dense operator on C^k with the euclidean norm, k <= 64. Spectral data is
/// computed once at construction: Schur factors, eigenvalues, normality flag,
/// singular values.
class MatrixOp {
  public:
    explicit MatrixOp(Eigen::MatrixXcd entries, MatrixBands bands = {});

    static MatrixOp diagonal(const std::vector<std::complex<double>>& diag, MatrixBands bands = {});
    /// Single Jordan cell, lower bidiagonal: lambda on the diagonal, ones
    /// below it, so coordinate 1 of the image depends on coordinate 1 only.
    static MatrixOp jordan_block(std::complex<double> lambda, int dim, MatrixBands bands = {});
    static MatrixOp rotation(double theta, MatrixBands bands = {});
    static MatrixOp identity(int dim, MatrixBands bands = {});

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
    const Eigen::VectorXd& singular_values() const { return singular_values_; }
    double op_norm() const { return singular_values_(0); }
    double min_singular_value() const { return singular_values_(singular_values_.size() - 1); }
    bool is_normal() const { return normal_; }
    const Eigen::MatrixXcd& schur_t() const { return schur_t_; }
    const Eigen::MatrixXcd& schur_q() const { return schur_q_; }
    const MatrixBands& bands() const { return bands_; }

  private:
    Eigen::MatrixXcd entries_;
    MatrixBands bands_;
    Eigen::MatrixXcd schur_t_;
    Eigen::MatrixXcd schur_q_;
    Eigen::VectorXcd eigenvalues_;
    Eigen::VectorXd singular_values_;
    bool normal_ = false;
};

/// ||block^n|| <= scale * rate^n for every n >= 0. Verified by a power sweep
/// up to n_check, where ||block^{n_check}|| <= rate^{n_check} extends the
/// bound to all n by submultiplicativity. Empty block: scale = rate = 0.
struct PowerBound {
    double scale = 0.0;
    double rate = 0.0;
    std::int64_t n_check = 0;
};

/// Invariant-subspace decomposition of a hyperbolic matrix. The restricted
/// blocks are expressed in the orthonormal basis columns, the projections are
/// the (generally oblique) spectral projectors, and the power bounds cover
/// the stable block forward and the unstable block inverted.
struct SpectralSplit {
    Eigen::MatrixXcd stable_basis;
    Eigen::MatrixXcd unstable_basis;
    Eigen::MatrixXcd p_stable;
    Eigen::MatrixXcd p_unstable;
    Eigen::MatrixXcd stable_block;
    Eigen::MatrixXcd unstable_block;
    double stable_margin = 1.0;   // min over stable lambda of 1 - |lambda|
    double unstable_margin = 1.0; // min over unstable lambda of |lambda| - 1
    double beta = 1.0;            // max(||p_stable||, ||p_unstable||)
    PowerBound stable_power;
    PowerBound unstable_power;

    int stable_dim() const { return static_cast<int>(stable_basis.cols()); }
    int unstable_dim() const { return static_cast<int>(unstable_basis.cols()); }
};

/// True iff every eigenvalue clears the unit circle by more than the band;
/// an eigenvalue on the circle at numeric precision decides False exactly,
/// anything else inside the band is Undetermined.
Verdict is_hyperbolic_matrix(const MatrixOp& a);
Verdict is_hyperbolic_matrix(const MatrixOp& a, double band);

/// Requires is_hyperbolic_matrix True. Orders the Schur form stable-first,
/// reads the stable subspace off the leading Schur columns and the unstable
/// one from a triangular Sylvester solve, then fits the power bounds. The
/// rate candidates start at the spectral radius itself so exactly geometric
/// blocks keep scale = 1 and exact constants downstream.
SpectralSplit hyperbolic_splitting(const MatrixOp& a);

/// The four expansivity verdicts a normal matrix admits in closed form.
/// expansive and uniformly_expansive are two-sided notions and come back
/// Undetermined for numerically singular input.
struct NormalExpansivityReport {
    Verdict expansive;                      // no eigenvalue of A*A equals 1
    Verdict positively_expansive;           // all eigenvalues of A*A exceed 1
    Verdict uniformly_positively_expansive; // all |lambda| > 1
    Verdict uniformly_expansive;            // no |lambda| = 1
};

/// Throws for non-normal input (use the orbit probes there).
NormalExpansivityReport normal_expansive(const MatrixOp& a);

enum class CounterexampleMode { lp, l1, positive };

/// A finite-window pseudotrajectory with small defects that no trajectory
/// tracks. The pivot coordinate of the matrix acts as multiplication by a
/// unimodular lambda, so along that coordinate every orbit is frozen while
/// the constructed points drift: harmonic partial sums (lp mode, defects
/// p-summable for p > 1), reciprocals (l1 mode, absolutely summable), or an
/// exact arithmetic ramp (positive mode, defect norm exactly delta).
///
/// Points and defects are stored in the frame of A/lambda, which fixes the
/// pivot row exactly; multiplying point n by lambda^n recovers the
/// pseudotrajectory of A itself with the same norms, so every certificate
/// below is frame-independent. Defect vectors hold the constructed closed
/// forms exactly; recomputing them from the points agrees to ulp scale.
struct CounterexampleCertificate {
    CounterexampleMode mode;
    double p = 2.0;     // defect-sum exponent (lp mode)
    double delta = 0.1; // ramp step (positive mode)
    int pivot = 0;
    std::complex<double> lambda;
    std::vector<Eigen::VectorXcd> points;  // x_0 .. x_N
    std::vector<Eigen::VectorXcd> defects; // z_n = x_{n+1} - (A/lambda) x_n, n = 0 .. N-1
    std::vector<double> defect_norms;
    std::vector<double> pivot_drift;       // pivot coordinate of x_n, n = 0 .. N
    double defect_power_sum = 0.0;         // sum ||z_n||^p (p = 1 outside lp mode)
    double defect_sup = 0.0;
    /// Exact minimum over base points of the window error functional along
    /// the pivot: max_n |drift_n - c| for lp/positive, sum_n |drift_n - c|
    /// for l1. Grows without bound as the window grows.
    double divergence_minimax = 0.0;
    std::string detail;
};

/// Requires a coordinate row of the matrix equal to lambda * e_i with
/// unimodular lambda (the input is expected in Jordan coordinates); throws
/// when no such row exists.
CounterexampleCertificate fd1_counterexample(const MatrixOp& a, CounterexampleMode mode,
                                             std::int64_t window, double p = 2.0,
                                             double delta = 0.1);

/// Certifies that no finite shadowing constant works: with unit defects fed
/// along a unimodular eigendirection, the eigen-projection coefficient of
/// any tracking orbit walks like n + c, so its window sup is at least
/// lower_bound regardless of the base point. The minimax is exact.
struct RefutationCertificate {
    std::complex<double> lambda;
    Eigen::VectorXcd direction; // unit eigenvector, ||A v - lambda v|| = residual
    double residual = 0.0;
    std::int64_t window = 0;
    bool two_sided = true;
    double defect_sup = 1.0; // the driving defects lambda^{n+1} v have unit norm
    double lower_bound = 0.0;
    std::string detail;
};

/// Window [-N, N] when two_sided, else [0, N]. Throws when no eigenvalue
/// sits on the unit circle at numeric precision.
RefutationCertificate refute_shadowing(const MatrixOp& a, std::int64_t window,
                                       bool two_sided = true);

/// Numbers from an end-to-end shadow solve, kept as a positive certificate.
struct ShadowRunSummary {
    double bound_k = 0.0;
    double delta = 0.0;
    double sup_error = 0.0;
    double tol = 0.0;
    bool certified = false;
    std::int64_t window = 0;
    std::uint64_t seed = 0;
};

/// Hyperbolicity decides positive shadowing for normal matrices; the decided
/// side ships with a constructive certificate: a certified shadow run when
/// hyperbolic, an unbounded-correction refutation when not.
struct NormalShadowingDecision {
    Verdict verdict;
    std::optional<ShadowRunSummary> certificate;
    std::optional<RefutationCertificate> refutation;
};

NormalShadowingDecision positive_shadowing_decision_normal(const MatrixOp& a,
                                                           std::int64_t window = 100,
                                                           std::uint64_t seed = 1);

/// First candidate whose forward orbit dips below cfg.probe_floor and climbs
/// above cfg.probe_ceiling within the horizon (capped at 4096 steps; matrix
/// powers are dense). A witness is sound by construction; none is a
/// semi-decision.
std::optional<IrregularWitness> irregular_vector_probe(const MatrixOp& a,
                                                       const std::vector<Eigen::VectorXcd>& candidates,
                                                       const ClassifierConfig& cfg);

} // namespace lindyn
