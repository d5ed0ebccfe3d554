#include "lindyn/weights.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lindyn {

namespace {

constexpr std::int64_t kBilateralMin = std::numeric_limits<std::int64_t>::min();

void check_period(const std::vector<Complex>& period, const char* side) {
    for (const auto& v : period) {
        if (v == Complex(0.0, 0.0))
            throw std::invalid_argument(std::string(side) + " period contains a zero weight");
    }
}

std::vector<double> logs_of(const std::vector<Complex>& vals) {
    std::vector<double> out;
    out.reserve(vals.size());
    for (const auto& v : vals) out.push_back(std::log(std::abs(v)));
    return out;
}

std::vector<double> prefix_of(const std::vector<double>& logs) {
    std::vector<double> out(logs.size() + 1, 0.0);
    for (std::size_t i = 0; i < logs.size(); ++i) out[i + 1] = out[i] + logs[i];
    return out;
}

// sum of period_log[(start + j) mod len] for j in [0, count); computed as
// full periods plus one in-period partial so that equal-content segments get
// bit-identical sums regardless of where they sit in the tail
double period_segment_sum(const std::vector<double>& prefix, double total, std::int64_t len,
                          std::int64_t start, std::int64_t count) {
    if (count <= 0) return 0.0;
    std::int64_t full = count / len;
    std::int64_t rem = count % len;
    std::int64_t p = ((start % len) + len) % len;
    double partial;
    if (p + rem <= len)
        partial = prefix[static_cast<std::size_t>(p + rem)] - prefix[static_cast<std::size_t>(p)];
    else
        partial = (total - prefix[static_cast<std::size_t>(p)]) +
                  prefix[static_cast<std::size_t>(p + rem - len)];
    return static_cast<double>(full) * total + partial;
}

} // namespace

WeightSequence WeightSequence::bilateral(std::vector<Complex> left_period, WeightCore core,
                                         std::vector<Complex> right_period) {
    if (left_period.empty() || right_period.empty())
        throw std::invalid_argument("bilateral description needs both periodic tails");
    check_period(left_period, "left");
    check_period(right_period, "right");
    WeightSequence w;
    w.support_ = Support::bilateral;
    w.left_ = std::move(left_period);
    w.right_ = std::move(right_period);
    w.core_ = std::move(core);
    w.finish_setup();
    return w;
}

WeightSequence WeightSequence::unilateral(WeightCore core, std::vector<Complex> right_period) {
    if (right_period.empty())
        throw std::invalid_argument("unilateral description needs a right periodic tail");
    if (core.start_index != 1)
        throw std::invalid_argument("unilateral weights start at index 1");
    check_period(right_period, "right");
    WeightSequence w;
    w.support_ = Support::unilateral;
    w.right_ = std::move(right_period);
    w.core_ = std::move(core);
    w.finish_setup();
    return w;
}

WeightSequence WeightSequence::doubling_blocks(double t) {
    if (!(t > 1.0))
        throw std::invalid_argument("doubling_blocks requires t > 1");
    WeightSequence w;
    w.support_ = Support::bilateral;
    w.family_ = WeightFamily::doubling_blocks;
    w.params_ = {t};
    w.core_.start_index = 0;
    return w;
}

WeightSequence WeightSequence::theorem_d(double alpha) {
    if (!(alpha > 1.0))
        throw std::invalid_argument("theorem_d requires alpha > 1");
    WeightSequence w;
    w.support_ = Support::bilateral;
    w.family_ = WeightFamily::theorem_d;
    w.params_ = {alpha};
    w.left_ = {Complex(alpha, 0.0)};
    w.right_ = {Complex(1.0 / alpha, 0.0)};
    w.core_.start_index = 0; // cut: right tail starts at 0
    w.finish_setup();
    return w;
}

WeightSequence WeightSequence::uniform_expansive_pair(double mu_left, double mu_right) {
    if (!(mu_left > 0.0) || !(mu_right > 0.0))
        throw std::invalid_argument("uniform_expansive_pair requires positive moduli");
    WeightSequence w;
    w.support_ = Support::bilateral;
    w.family_ = WeightFamily::uniform_expansive_pair;
    w.params_ = {mu_left, mu_right};
    w.left_ = {Complex(mu_left, 0.0)};
    w.right_ = {Complex(mu_right, 0.0)};
    w.core_.start_index = 1; // cut: first right element at index 1
    w.finish_setup();
    return w;
}

void WeightSequence::finish_setup() {
    left_log_ = logs_of(left_);
    right_log_ = logs_of(right_);
    left_prefix_ = prefix_of(left_log_);
    right_prefix_ = prefix_of(right_log_);
    left_total_ = left_prefix_.empty() ? 0.0 : left_prefix_.back();
    right_total_ = right_prefix_.empty() ? 0.0 : right_prefix_.back();

    core_log_.clear();
    core_prefix_.assign(1, 0.0);
    core_zero_prefix_.assign(1, 0);
    core_zero_total_ = 0;
    for (const auto& v : core_.values) {
        bool zero = (v == Complex(0.0, 0.0));
        double lg = zero ? 0.0 : std::log(std::abs(v));
        core_log_.push_back(lg);
        core_prefix_.push_back(core_prefix_.back() + lg);
        core_zero_total_ += zero ? 1 : 0;
        core_zero_prefix_.push_back(core_zero_total_);
    }
}

std::int64_t WeightSequence::domain_min() const {
    return support_ == Support::unilateral ? 1 : kBilateralMin;
}

Complex WeightSequence::weight_at(std::int64_t n) const {
    if (!in_domain(n))
        throw std::out_of_range("weight index below domain");
    if (family_ == WeightFamily::doubling_blocks) {
        double t = params_[0];
        if (n >= 0) return Complex(t, 0.0);
        std::uint64_t i = static_cast<std::uint64_t>(-n - 1);
        int block = std::bit_width(i + 1) - 1;
        return Complex(block % 2 == 0 ? t : 1.0 / t, 0.0);
    }
    if (n >= core_.start_index && n <= core_.end_index()) {
        return core_.values[static_cast<std::size_t>(n - core_.start_index)];
    }
    if (n > core_.end_index()) {
        std::int64_t o = n - core_.end_index() - 1;
        return right_[static_cast<std::size_t>(o % static_cast<std::int64_t>(right_.size()))];
    }
    std::int64_t o = core_.start_index - 1 - n;
    return left_[static_cast<std::size_t>(o % static_cast<std::int64_t>(left_.size()))];
}

double WeightSequence::weight_log_abs(std::int64_t n) const {
    return std::log(std::abs(weight_at(n)));
}

std::int64_t doubling_left_exponent(std::int64_t m) {
    // product w_{-1}..w_{-m}: blocks j = 0,1,2,... of length 2^j, sign (-1)^j
    std::int64_t e = 0;
    std::int64_t rem = m;
    int j = 0;
    while (rem > 0) {
        std::int64_t len = (j < 62) ? (std::int64_t{1} << j) : rem;
        std::int64_t take = std::min(len, rem);
        e += (j % 2 == 0) ? take : -take;
        rem -= take;
        ++j;
    }
    return e;
}

WeightSequence::LogSum WeightSequence::cum_log_abs(std::int64_t a, std::int64_t b) const {
    LogSum out;
    if (b < a) return out;
    if (!in_domain(a))
        throw std::out_of_range("weight index below domain");

    if (family_ == WeightFamily::doubling_blocks) {
        double t = params_[0];
        std::int64_t e = 0;
        if (b >= 0) e += b - std::max<std::int64_t>(a, 0) + 1;
        if (a < 0) {
            std::int64_t hi = std::min<std::int64_t>(b, -1);
            if (hi >= a) {
                // positions -m for m in [-hi, -a]
                e += doubling_left_exponent(-a) - doubling_left_exponent(-hi - 1);
            }
        }
        out.log_sum = static_cast<double>(e) * std::log(t);
        return out;
    }

    const std::int64_t cs = core_.start_index;
    const std::int64_t ce = core_.end_index();

    // left tail part: [a, min(b, cs-1)], offsets o = cs-1-n
    if (a < cs) {
        std::int64_t hi = std::min(b, cs - 1);
        if (hi >= a) {
            std::int64_t o_near = cs - 1 - hi; // smaller offset
            std::int64_t o_far = cs - 1 - a;
            std::int64_t len = static_cast<std::int64_t>(left_.size());
            out.log_sum +=
                period_segment_sum(left_prefix_, left_total_, len, o_near, o_far - o_near + 1);
        }
    }
    // core part
    if (!core_.empty() && b >= cs && a <= ce) {
        std::int64_t lo = std::max(a, cs) - cs;
        std::int64_t hi = std::min(b, ce) - cs;
        out.log_sum += core_prefix_[static_cast<std::size_t>(hi + 1)] -
                       core_prefix_[static_cast<std::size_t>(lo)];
        out.zero_count += core_zero_prefix_[static_cast<std::size_t>(hi + 1)] -
                          core_zero_prefix_[static_cast<std::size_t>(lo)];
    }
    // right tail part: [max(a, ce+1), b], offsets o = n-(ce+1)
    if (b > ce) {
        std::int64_t lo = std::max(a, ce + 1);
        if (b >= lo) {
            std::int64_t o_lo = lo - ce - 1;
            std::int64_t o_hi = b - ce - 1;
            std::int64_t len = static_cast<std::int64_t>(right_.size());
            out.log_sum +=
                period_segment_sum(right_prefix_, right_total_, len, o_lo, o_hi - o_lo + 1);
        }
    }
    return out;
}

std::optional<double> WeightSequence::log_gm_left() const {
    if (support_ == Support::unilateral) return std::nullopt;
    if (family_ == WeightFamily::doubling_blocks) return std::nullopt;
    return left_total_ / static_cast<double>(left_.size());
}

double WeightSequence::log_gm_right() const {
    if (family_ == WeightFamily::doubling_blocks) return std::log(params_[0]);
    return right_total_ / static_cast<double>(right_.size());
}

std::optional<std::int64_t> WeightSequence::window_exponent(std::int64_t k, std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("window length must be >= 0");
    if (n == 0) return 0;
    std::int64_t b = k + n - 1;
    if (family_ == WeightFamily::doubling_blocks) {
        std::int64_t e = 0;
        if (b >= 0) e += b - std::max<std::int64_t>(k, 0) + 1;
        if (k < 0) {
            std::int64_t hi = std::min<std::int64_t>(b, -1);
            if (hi >= k) e += doubling_left_exponent(-k) - doubling_left_exponent(-hi - 1);
        }
        return e;
    }
    if (family_ == WeightFamily::theorem_d) {
        std::int64_t neg = (k < 0) ? (std::min<std::int64_t>(b, -1) - k + 1) : 0;
        std::int64_t pos = (b >= 0) ? (b - std::max<std::int64_t>(k, 0) + 1) : 0;
        return neg - pos;
    }
    return std::nullopt;
}

double WeightSequence::power_base() const {
    if (family_ == WeightFamily::doubling_blocks || family_ == WeightFamily::theorem_d)
        return params_[0];
    return 0.0;
}

Magnitude window_product(const WeightSequence& w, std::int64_t k, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("window length must be >= 0");
    if (n == 0) return Magnitude::one();
    auto s = w.cum_log_abs(k, k + n - 1);
    if (s.zero_count > 0) return Magnitude::zero();
    return Magnitude::from_log(s.log_sum);
}

} // namespace lindyn
