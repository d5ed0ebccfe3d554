#include "lindyn/pseudo.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>

#include "lindyn/space.hpp"

namespace lindyn {

namespace {

void check_window(double delta, std::int64_t n_min, std::int64_t n_max) {
    if (!(delta >= 0.0)) throw std::invalid_argument("defect size must be >= 0");
    if (n_min > 0 || n_max < 0 || n_min > n_max)
        throw std::invalid_argument("the window must contain 0 with n_min <= n_max");
}

// single-coordinate kick: index in [lo, hi], sign from one extra draw
std::pair<std::int64_t, double> draw_kick(std::mt19937_64& rng, std::int64_t lo,
                                          std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    auto j = lo + static_cast<std::int64_t>(rng() % span);
    double sg = (rng() & 1u) ? 1.0 : -1.0;
    return {j, sg};
}

} // namespace

PseudoTrajectory generate_pseudotrajectory(const ShiftOperator& op, const BiVector& x0,
                                           double delta, std::int64_t n_min, std::int64_t n_max,
                                           std::uint64_t seed, std::int64_t band) {
    check_window(delta, n_min, n_max);
    if (band < 0) throw std::invalid_argument("kick band must be >= 0");
    if (n_min < 0 && !op.invertible())
        throw std::invalid_argument("the backward leg needs an invertible shift");

    const auto count = static_cast<std::size_t>(n_max - n_min + 1);
    PseudoTrajectory pt;
    pt.n_min = n_min;
    pt.n_max = n_max;
    pt.points.resize(count);
    pt.defects.resize(count - 1);

    std::mt19937_64 rng(seed);
    const auto i0 = static_cast<std::size_t>(-n_min);
    pt.points[i0] = x0;
    for (std::int64_t n = 0; n < n_max; ++n) {
        auto [j, sg] = draw_kick(rng, -band, band);
        BiVector z;
        if (delta > 0.0) z.set(j, Complex(sg * delta, 0.0));
        auto i = i0 + static_cast<std::size_t>(n);
        pt.defects[i] = z;
        pt.points[i + 1] = op.apply(pt.points[i]) + z;
    }
    for (std::int64_t n = 0; n > n_min; --n) {
        auto [j, sg] = draw_kick(rng, -band, band);
        BiVector z;
        if (delta > 0.0) z.set(j, Complex(sg * delta, 0.0));
        auto i = i0 - static_cast<std::size_t>(1 - n); // defect slot for step n-1
        pt.defects[i] = z;
        pt.points[i] = op.apply(pt.points[i + 1] - z, true);
    }

    pt.defect_norms.reserve(pt.defects.size());
    for (const auto& z : pt.defects) {
        double nrm = vector_norm(z, op.space);
        pt.defect_norms.push_back(nrm);
        pt.delta = std::max(pt.delta, nrm);
    }
    return pt;
}

MatrixPseudoTrajectory generate_pseudotrajectory(const MatrixOp& a, const Eigen::VectorXcd& x0,
                                                 double delta, std::int64_t n_min,
                                                 std::int64_t n_max, std::uint64_t seed) {
    check_window(delta, n_min, n_max);
    if (x0.size() != a.dim()) throw std::invalid_argument("x0 dimension does not match");
    const bool invertible =
        a.min_singular_value() > a.bands().on_circle * std::max(1.0, a.op_norm());
    if (n_min < 0 && !invertible)
        throw std::invalid_argument("the backward leg needs an invertible matrix");

    const auto count = static_cast<std::size_t>(n_max - n_min + 1);
    MatrixPseudoTrajectory pt;
    pt.n_min = n_min;
    pt.n_max = n_max;
    pt.points.assign(count, Eigen::VectorXcd::Zero(a.dim()));
    pt.defects.assign(count - 1, Eigen::VectorXcd::Zero(a.dim()));

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    if (n_min < 0) lu.compute(a.entries());

    std::mt19937_64 rng(seed);
    const auto i0 = static_cast<std::size_t>(-n_min);
    pt.points[i0] = x0;
    for (std::int64_t n = 0; n < n_max; ++n) {
        auto [j, sg] = draw_kick(rng, 0, a.dim() - 1);
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(a.dim());
        z(j) = Complex(sg * delta, 0.0);
        auto i = i0 + static_cast<std::size_t>(n);
        pt.defects[i] = z;
        pt.points[i + 1] = a.entries() * pt.points[i] + z;
    }
    for (std::int64_t n = 0; n > n_min; --n) {
        auto [j, sg] = draw_kick(rng, 0, a.dim() - 1);
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(a.dim());
        z(j) = Complex(sg * delta, 0.0);
        auto i = i0 - static_cast<std::size_t>(1 - n);
        pt.defects[i] = z;
        pt.points[i] = lu.solve(pt.points[i + 1] - z);
    }

    pt.defect_norms.reserve(pt.defects.size());
    for (const auto& z : pt.defects) {
        double nrm = z.norm();
        pt.defect_norms.push_back(nrm);
        pt.delta = std::max(pt.delta, nrm);
    }
    return pt;
}

PseudoTrajectory rescale_defects(const ShiftOperator& op, const PseudoTrajectory& pt, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("defect scale must be >= 0");
    if (pt.n_min < 0 && !op.invertible())
        throw std::invalid_argument("the backward leg needs an invertible shift");
    PseudoTrajectory out;
    out.n_min = pt.n_min;
    out.n_max = pt.n_max;
    out.points.resize(pt.points.size());
    out.defects.resize(pt.defects.size());
    const auto i0 = static_cast<std::size_t>(-pt.n_min);
    for (std::size_t i = 0; i < pt.defects.size(); ++i)
        out.defects[i] = Complex(s, 0.0) * pt.defects[i];
    out.points[i0] = pt.points[i0];
    for (std::size_t i = i0; i + 1 < out.points.size(); ++i)
        out.points[i + 1] = op.apply(out.points[i]) + out.defects[i];
    for (std::size_t i = i0; i-- > 0;)
        out.points[i] = op.apply(out.points[i + 1] - out.defects[i], true);
    out.defect_norms.reserve(out.defects.size());
    for (const auto& z : out.defects) {
        double nrm = vector_norm(z, op.space);
        out.defect_norms.push_back(nrm);
        out.delta = std::max(out.delta, nrm);
    }
    return out;
}

MatrixPseudoTrajectory rescale_defects(const MatrixOp& a, const MatrixPseudoTrajectory& pt,
                                       double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("defect scale must be >= 0");
    const bool invertible =
        a.min_singular_value() > a.bands().on_circle * std::max(1.0, a.op_norm());
    if (pt.n_min < 0 && !invertible)
        throw std::invalid_argument("the backward leg needs an invertible matrix");
    MatrixPseudoTrajectory out;
    out.n_min = pt.n_min;
    out.n_max = pt.n_max;
    out.points.assign(pt.points.size(), Eigen::VectorXcd::Zero(a.dim()));
    out.defects.resize(pt.defects.size());
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    if (pt.n_min < 0) lu.compute(a.entries());
    const auto i0 = static_cast<std::size_t>(-pt.n_min);
    for (std::size_t i = 0; i < pt.defects.size(); ++i)
        out.defects[i] = Complex(s, 0.0) * pt.defects[i];
    out.points[i0] = pt.points[i0];
    for (std::size_t i = i0; i + 1 < out.points.size(); ++i)
        out.points[i + 1] = a.entries() * out.points[i] + out.defects[i];
    for (std::size_t i = i0; i-- > 0;)
        out.points[i] = lu.solve(out.points[i + 1] - out.defects[i]);
    out.defect_norms.reserve(out.defects.size());
    for (const auto& z : out.defects) {
        double nrm = z.norm();
        out.defect_norms.push_back(nrm);
        out.delta = std::max(out.delta, nrm);
    }
    return out;
}

} // namespace lindyn
