#pragma once

#include <cmath>
#include <limits>

namespace lindyn {

/**
 * Nonnegative real tracked in the log domain.
 *
 * Weight products along long orbits overflow/underflow double range long
 * before they stop being meaningful (2^±100000 is routine), so every product
 * magnitude in the library is carried as log|.| plus an exact-zero flag.
 * A Magnitude is never a floating infinity unless it genuinely represents
 * one (is_infinite()).
 */
class Magnitude {
public:
    Magnitude() : log_abs_(0.0), zero_(false) {}

    static Magnitude zero() {
        Magnitude m;
        m.zero_ = true;
        m.log_abs_ = -std::numeric_limits<double>::infinity();
        return m;
    }
    static Magnitude one() { return Magnitude(); }
    static Magnitude from_log(double log_abs) {
        Magnitude m;
        m.log_abs_ = log_abs;
        return m;
    }
    static Magnitude from_value(double v) {
        if (v == 0.0) return zero();
        return from_log(std::log(std::abs(v)));
    }

    bool is_zero() const { return zero_; }
    bool is_infinite() const {
        return !zero_ && std::isinf(log_abs_) && log_abs_ > 0;
    }

    // log|.|; -inf when zero.
    double log_abs() const { return log_abs_; }

    // Materialize. May round to 0 or +inf outside double range; callers that
    // care about range use log_abs() instead.
    double value() const { return zero_ ? 0.0 : std::exp(log_abs_); }

    Magnitude operator*(const Magnitude& o) const {
        if (zero_ || o.zero_) return zero();
        return from_log(log_abs_ + o.log_abs_);
    }
    Magnitude operator/(const Magnitude& o) const {
        // division by zero is a caller bug; surfaces as +inf log
        if (zero_) return zero();
        return from_log(log_abs_ - o.log_abs_);
    }
    Magnitude inverse() const { return one() / *this; }

    Magnitude pow_int(long long n) const {
        if (zero_) return n == 0 ? one() : zero();
        return from_log(log_abs_ * static_cast<double>(n));
    }

    bool operator<(const Magnitude& o) const {
        if (zero_) return !o.zero_;
        if (o.zero_) return false;
        return log_abs_ < o.log_abs_;
    }
    bool operator<=(const Magnitude& o) const { return !(o < *this); }
    bool operator>(const Magnitude& o) const { return o < *this; }
    bool operator>=(const Magnitude& o) const { return !(*this < o); }

private:
    double log_abs_;
    bool zero_;
};

} // namespace lindyn
