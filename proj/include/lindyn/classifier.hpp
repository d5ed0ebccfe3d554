#pragma once

#include <optional>
#include <vector>

#include "lindyn/shift.hpp"
#include "lindyn/space.hpp"
#include "lindyn/verdict.hpp"
#include "lindyn/weights.hpp"

namespace lindyn {

struct ClassifierConfig {
    std::int64_t horizon = 200;  // max exponent n explored by searches
    double threshold_c = 2.0;    // expansivity constant c > 1
    double gm_tolerance = 1e-9;  // dead band around geometric mean 1
    std::int64_t q_max = 3;      // cyclicity checks run q = 1..q_max
    double eta = 1e-2;           // smallness target for liminf searches
    double probe_floor = 1e-3;   // irregular-vector dip
    double probe_ceiling = 1e3;  // irregular-vector rise / growth-probe target
    std::int64_t probe_horizon = std::int64_t(1) << 23;
    std::int64_t fhc_j_max = 8;  // canonical test vectors e_j, |j| <= fhc_j_max
};

/// Geometric means of the periodic tails plus core extremes. Throws for the
/// block family, which has no periodic left tail; use the horizon-based ops.
struct TailSummary {
    std::optional<double> gm_left;
    double gm_right = 1.0;
    std::optional<double> core_min;
    std::optional<double> core_max;
    std::optional<double> log_gm_left;
    double log_gm_right = 0.0;
};
TailSummary tail_summary(const WeightSequence& w);

/// Placement of a tail's log-geometric-mean against the dead band. An exact
/// 0.0 is the genuine boundary (constant-modulus products), not a float that
/// happens to land near it, so it gets its own side.
enum class GmSide { below_one, exactly_one, above_one, indeterminate };
GmSide gm_side(double log_gm, double tol);

/// sup |w_1...w_n| = inf or sup |w_{-n}...w_{-1}|^{-1} = inf. Invertible
/// bilateral forward shifts only.
Verdict classify_expansive_forward(const WeightSequence& w, const ClassifierConfig& cfg);

/// Branch tags, per the nontrivial partitions of the index set:
///   first:  inf over all length-n windows of |products| -> inf
///   second: sup over all length-n windows of |products| -> 0
///   third:  windows starting in [1, inf) grow and windows ending in
///           (-inf, -2] shrink, both uniformly
/// Exact on periodic tails; the primary tag lands in Verdict::branch.
Verdict classify_uniformly_expansive_forward(const WeightSequence& w,
                                             const ClassifierConfig& cfg);

/// Forward shifts read the ray w_1...w_n, backward shifts the ray
/// w_{-n}...w_{-1}; with inverse set, the same rays inverted (the literal
/// conjugated shift differs by one bounded factor, irrelevant to sup = inf).
/// The sup-condition is and-ed with the nonzero-weight test. Unilateral
/// backward shifts annihilate e_1 and are never positively expansive.
Verdict classify_positively_expansive(const WeightSequence& w, const ClassifierConfig& cfg,
                                      Direction dir, bool inverse = false);

/// Uniform variant: inf over window placements allowed by the index set must
/// diverge (inverse: sup must vanish).
Verdict classify_uniformly_positively_expansive(const WeightSequence& w,
                                                const ClassifierConfig& cfg, Direction dir,
                                                bool inverse = false);

struct ShiftSpectralRadii {
    double r_fw = 0.0;
    std::optional<double> r_fw_inv; // absent when not invertible (disc spectrum)
};
ShiftSpectralRadii shift_spectral_radii(const WeightSequence& w);

/// Invertible bilateral: annulus spectrum [min gm, max gm]; hyperbolic iff
/// both geometric means sit strictly on the same side of 1. Otherwise disc
/// spectrum of radius gm_right; hyperbolic iff that radius < 1.
Verdict is_hyperbolic_shift(const WeightSequence& w, const ClassifierConfig& cfg = {});

/// Criterion for the backward shift B_w: for every q, some n makes
/// max{ 1/|w_1...w_{n+q}|, |w_0 w_{-1}...w_{-n+q+1}| } <= eta.
Verdict hypercyclicity_check(const WeightSequence& w, const ClassifierConfig& cfg);

/// Criterion for B_w with the ratio |w_0...w_{-n+q+1}| / |w_1...w_{n+q}|.
Verdict supercyclicity_check(const WeightSequence& w, const ClassifierConfig& cfg);
Magnitude supercyclicity_ratio(const WeightSequence& w, std::int64_t n, std::int64_t q);

/// Forward shift F_w with S = F_w^{-1}: geometric decay of ||T^n e_j|| and
/// ||T^{-n} e_j|| for |j| <= fhc_j_max makes both series converge
/// unconditionally on finitely supported vectors.
Verdict frequent_hc_check(const WeightSequence& w, const ClassifierConfig& cfg);

struct HyponormalReport {
    bool hyponormal = false;           // |w_n| nondecreasing over the index set
    bool unit_modulus_weight = false;  // some |w_n| exactly 1
    Verdict expansive;
    Verdict uniformly_expansive;
};
HyponormalReport hyponormal_expansive_check(const WeightSequence& w,
                                            const ClassifierConfig& cfg);

struct IrregularWitness {
    std::size_t candidate = 0;
    std::int64_t n_low = 0;
    double log_norm_low = 0.0;
    std::int64_t n_high = 0;
    double log_norm_high = 0.0;
};
/// First candidate whose forward orbit under the chosen shift dips below
/// probe_floor and exceeds probe_ceiling. Periodic tails admit an exact
/// early cut-off (orbit norms drift monotonically once the support clears
/// the core), so "none" does not cost the full probe_horizon.
std::optional<IrregularWitness> irregular_vector_probe(const WeightSequence& w, Direction dir,
                                                       const std::vector<BiVector>& candidates,
                                                       const SpaceSpec& space,
                                                       const ClassifierConfig& cfg);

/// Whether (n ||F_w^n e_0||) over n in Z is unbounded (True/WitnessedTrue,
/// an expansivity certificate) or bounded (False). Bounded requires strictly
/// geometric decay both ways: gm_right < 1 and gm_left > 1; a tail with gm
/// exactly 1 leaves norms ~ constant and the sequence grows linearly.
Verdict ne0_growth_probe(const WeightSequence& w, const ClassifierConfig& cfg);

} // namespace lindyn
