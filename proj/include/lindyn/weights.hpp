#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lindyn/bivector.hpp"
#include "lindyn/magnitude.hpp"

namespace lindyn {

enum class Support { bilateral, unilateral };

/// Generator families with closed-form weight rules.
enum class WeightFamily { none, doubling_blocks, theorem_d, uniform_expansive_pair };

/// Explicitly listed weights w_{start_index}..w_{start_index+len-1}.
/// An empty core still carries start_index: it marks the cut between tails.
struct WeightCore {
    std::int64_t start_index = 0;
    std::vector<Complex> values;

    std::int64_t end_index() const {
        return start_index + static_cast<std::int64_t>(values.size()) - 1;
    }
    bool empty() const { return values.empty(); }
};

/**
 * Weight sequence of a weighted shift, described finitely.
 *
 * Piecewise-periodic form: left_period repeats leftward from core start
 * (its first element sits at core_start - 1), core is explicit, right_period
 * repeats rightward from core end (first element at core_end + 1).
 *
 * Families:
 *   doubling_blocks(t):    w_n = t for n >= 0; leftward blocks of t's and
 *                          1/t's of lengths 1, 2, 4, ... starting at w_{-1}.
 *   theorem_d(alpha):      w_n = alpha for n < 0, 1/alpha for n >= 0.
 *   uniform_expansive_pair(mu_l, mu_r): w_n = mu_l for n <= 0, mu_r for n >= 1.
 *
 * The two single-cut families also materialize their periodic view, so the
 * closed-form classifiers treat them uniformly; doubling_blocks has no
 * periodic tails and is evaluated through its block rule.
 *
 * Period elements must be nonzero; core entries may be zero (flagged, makes
 * the shift non-invertible). Unilateral sequences live on indices >= 1 and
 * have no left tail.
 */
class WeightSequence {
public:
    static WeightSequence bilateral(std::vector<Complex> left_period, WeightCore core,
                                    std::vector<Complex> right_period);
    static WeightSequence unilateral(WeightCore core, std::vector<Complex> right_period);

    static WeightSequence doubling_blocks(double t);
    static WeightSequence theorem_d(double alpha);
    static WeightSequence uniform_expansive_pair(double mu_left, double mu_right);

    Support support() const { return support_; }
    WeightFamily family() const { return family_; }
    const std::vector<double>& family_params() const { return params_; }

    bool has_periodic_tails() const { return family_ != WeightFamily::doubling_blocks; }
    bool has_left_tail() const { return support_ == Support::bilateral; }

    const std::vector<Complex>& left_period() const { return left_; }
    const std::vector<Complex>& right_period() const { return right_; }
    const WeightCore& core() const { return core_; }
    std::int64_t core_start() const { return core_.start_index; }
    std::int64_t core_end() const { return core_.end_index(); }

    const std::map<std::string, bool>& annotations() const { return annotations_; }
    void annotate(const std::string& key, bool value) { annotations_[key] = value; }
    bool annotated(const std::string& key) const {
        auto it = annotations_.find(key);
        return it != annotations_.end() && it->second;
    }

    /// Lowest valid index (INT64_MIN sentinel for bilateral).
    std::int64_t domain_min() const;
    bool in_domain(std::int64_t n) const { return n >= domain_min(); }

    Complex weight_at(std::int64_t n) const;
    double weight_log_abs(std::int64_t n) const;

    bool has_zero_weight() const { return core_zero_total_ > 0; }
    /// inf |w_n| > 0 and two-sided index set.
    bool invertible() const {
        return support_ == Support::bilateral && !has_zero_weight();
    }

    struct LogSum {
        double log_sum = 0.0;
        std::int64_t zero_count = 0;
    };
    /// Sum of log|w_i| over i in [a, b] (inclusive); empty when b < a.
    /// O(core + period) regardless of range width.
    LogSum cum_log_abs(std::int64_t a, std::int64_t b) const;

    /// Geometric means of the periodic tails, as logs (exact 0.0 means the
    /// tail is exactly norm-neutral). Left absent for unilateral sequences.
    std::optional<double> log_gm_left() const;
    double log_gm_right() const;

    /// For pure-power families (doubling_blocks, theorem_d): the integer
    /// exponent e with |w_k ... w_{k+n-1}| = base^e, computed exactly.
    std::optional<std::int64_t> window_exponent(std::int64_t k, std::int64_t n) const;
    double power_base() const; // base of window_exponent; 0 if not a power family

private:
    WeightSequence() = default;
    void finish_setup();

    Support support_ = Support::bilateral;
    WeightFamily family_ = WeightFamily::none;
    std::vector<double> params_;

    std::vector<Complex> left_, right_;
    WeightCore core_;
    std::map<std::string, bool> annotations_;

    // prefix caches (built once)
    std::vector<double> left_log_, right_log_;          // log|period element|
    std::vector<double> left_prefix_, right_prefix_;    // prefix sums, size len+1
    double left_total_ = 0.0, right_total_ = 0.0;
    std::vector<double> core_log_;
    std::vector<double> core_prefix_;
    std::vector<std::int64_t> core_zero_prefix_;
    std::int64_t core_zero_total_ = 0;
};

/// |w_k * ... * w_{k+n-1}| as a Magnitude; n = 0 is the empty product 1.
Magnitude window_product(const WeightSequence& w, std::int64_t k, std::int64_t n);

/// Signed t-exponent of w_{-1} * w_{-2} * ... * w_{-m} for doubling_blocks.
std::int64_t doubling_left_exponent(std::int64_t m);

} // namespace lindyn
