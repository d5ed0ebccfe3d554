#pragma once

#include <complex>
#include <cstdint>
#include <map>

#include "lindyn/space.hpp"

namespace lindyn {

using Complex = std::complex<double>;

/**
 * Finitely supported complex sequence over Z.
 *
 * Storage is an ordered index -> value map; exact zeros are never stored, so
 * support() is the true support and iteration order is deterministic.
 * Unilateral vectors are the special case support >= 1.
 */
class BiVector {
public:
    using Map = std::map<std::int64_t, Complex>;

    BiVector() = default;

    static BiVector basis(std::int64_t index, Complex scale = Complex(1.0, 0.0)) {
        BiVector v;
        v.set(index, scale);
        return v;
    }

    void set(std::int64_t index, Complex value) {
        if (value == Complex(0.0, 0.0))
            entries_.erase(index);
        else
            entries_[index] = value;
    }
    Complex at(std::int64_t index) const {
        auto it = entries_.find(index);
        return it == entries_.end() ? Complex(0.0, 0.0) : it->second;
    }

    void add(std::int64_t index, Complex value) { set(index, at(index) + value); }

    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }

    std::int64_t min_index() const { return entries_.begin()->first; }
    std::int64_t max_index() const { return entries_.rbegin()->first; }

    BiVector& operator+=(const BiVector& o) {
        for (const auto& [i, v] : o.entries_) add(i, v);
        return *this;
    }
    BiVector& operator-=(const BiVector& o) {
        for (const auto& [i, v] : o.entries_) add(i, -v);
        return *this;
    }
    BiVector& operator*=(Complex c) {
        if (c == Complex(0.0, 0.0)) {
            entries_.clear();
            return *this;
        }
        for (auto& [i, v] : entries_) v *= c;
        return *this;
    }
    friend BiVector operator+(BiVector a, const BiVector& b) { return a += b; }
    friend BiVector operator-(BiVector a, const BiVector& b) { return a -= b; }
    friend BiVector operator*(Complex c, BiVector v) { return v *= c; }

    bool operator==(const BiVector& o) const { return entries_ == o.entries_; }

private:
    Map entries_;
};

/// Norm of a materialized vector in the given space (lp sum or c0 sup).
double vector_norm(const BiVector& x, const SpaceSpec& space);

} // namespace lindyn
