#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lindyn/bivector.hpp"
#include "lindyn/magnitude.hpp"
#include "lindyn/shift.hpp"
#include "lindyn/space.hpp"
#include "lindyn/weights.hpp"
#include "oracle.hpp"

using namespace lindyn;

namespace {

WeightSequence piecewise_sample() {
    // left tail ...,3,3 | core w_{-1}=1/2, w_0=1, w_1=2 | right tail 1/4,4,1/4,4,...
    WeightCore core;
    core.start_index = -1;
    core.values = {Complex(0.5, 0.0), Complex(1.0, 0.0), Complex(2.0, 0.0)};
    return WeightSequence::bilateral({Complex(3.0, 0.0)}, core,
                                     {Complex(0.25, 0.0), Complex(4.0, 0.0)});
}

} // namespace

TEST_CASE("magnitude log-domain arithmetic") {
    auto a = Magnitude::from_value(8.0);
    auto b = Magnitude::from_value(0.25);
    CHECK((a * b).value() == doctest::Approx(2.0));
    CHECK((a / b).value() == doctest::Approx(32.0));
    CHECK(a.pow_int(3).value() == doctest::Approx(512.0));
    CHECK(a.pow_int(0).value() == doctest::Approx(1.0));

    auto z = Magnitude::zero();
    CHECK(z.is_zero());
    CHECK((a * z).is_zero());
    CHECK(z < b);
    CHECK(a > b);
    CHECK(Magnitude::one().log_abs() == 0.0);

    // far outside double range, still ordered correctly
    auto huge = Magnitude::from_log(2000.0 * std::log(2.0));
    auto tiny = Magnitude::from_log(-2000.0 * std::log(2.0));
    CHECK(!huge.is_infinite());
    CHECK(tiny > Magnitude::zero());
    CHECK(huge > tiny);
}

TEST_CASE("space spec validation") {
    CHECK(SpaceSpec::lp(1.0).is_lp());
    CHECK(SpaceSpec::lp(2.0).name() == "l2.000000");
    CHECK(SpaceSpec::c0().name() == "c0");
    CHECK_THROWS_AS(SpaceSpec::lp(0.5), std::invalid_argument);
}

TEST_CASE("weight rules: split-geometric family") {
    auto w = WeightSequence::theorem_d(2.0);
    CHECK(w.weight_at(-1).real() == doctest::Approx(2.0));
    CHECK(w.weight_at(-100).real() == doctest::Approx(2.0));
    CHECK(w.weight_at(0).real() == doctest::Approx(0.5));
    CHECK(w.weight_at(57).real() == doctest::Approx(0.5));
    CHECK(w.invertible());
    CHECK(w.has_periodic_tails());
}

TEST_CASE("weight rules: doubling blocks listing") {
    auto w = WeightSequence::doubling_blocks(2.0);
    // (w_{-1}, w_{-2}, ...) = t | 1/t,1/t | t,t,t,t | 1/t x8 | ...
    CHECK(w.weight_at(-1).real() == doctest::Approx(2.0));
    CHECK(w.weight_at(-2).real() == doctest::Approx(0.5));
    CHECK(w.weight_at(-3).real() == doctest::Approx(0.5));
    for (int n = -7; n <= -4; ++n) CHECK(w.weight_at(n).real() == doctest::Approx(2.0));
    for (int n = -15; n <= -8; ++n) CHECK(w.weight_at(n).real() == doctest::Approx(0.5));
    CHECK(w.weight_at(-16).real() == doctest::Approx(2.0));
    CHECK(w.weight_at(0).real() == doctest::Approx(2.0));
    CHECK(w.weight_at(12).real() == doctest::Approx(2.0));
    CHECK(!w.has_periodic_tails());
}

TEST_CASE("weight rules: uniform expansive pair cut") {
    auto w = WeightSequence::uniform_expansive_pair(0.5, 2.0);
    CHECK(w.weight_at(0).real() == doctest::Approx(0.5));
    CHECK(w.weight_at(1).real() == doctest::Approx(2.0));
}

TEST_CASE("weight rules: piecewise periodic with core") {
    auto w = piecewise_sample();
    CHECK(w.weight_at(-1).real() == doctest::Approx(0.5));
    CHECK(w.weight_at(0).real() == doctest::Approx(1.0));
    CHECK(w.weight_at(1).real() == doctest::Approx(2.0));
    CHECK(w.weight_at(2).real() == doctest::Approx(0.25));
    CHECK(w.weight_at(3).real() == doctest::Approx(4.0));
    CHECK(w.weight_at(4).real() == doctest::Approx(0.25));
    CHECK(w.weight_at(-2).real() == doctest::Approx(3.0));
    CHECK(w.weight_at(-77).real() == doctest::Approx(3.0));
}

TEST_CASE("window products: frozen values") {
    auto td = WeightSequence::theorem_d(2.0);
    CHECK(window_product(td, 0, 3).value() == doctest::Approx(0.125));
    CHECK(window_product(td, -3, 3).value() == doctest::Approx(8.0));
    CHECK(window_product(td, -1, 2).value() == doctest::Approx(1.0));
    CHECK(window_product(td, 5, 0).value() == doctest::Approx(1.0)); // empty product

    auto db = WeightSequence::doubling_blocks(2.0);
    CHECK(window_product(db, -3, 3).value() == doctest::Approx(0.5));
    CHECK(window_product(db, 0, 4).value() == doctest::Approx(16.0));
}

TEST_CASE("window products: zero weights flagged through core") {
    WeightCore core;
    core.start_index = 0;
    core.values = {Complex(0.0, 0.0)};
    auto w = WeightSequence::bilateral({Complex(2.0, 0.0)}, core, {Complex(2.0, 0.0)});
    CHECK(w.has_zero_weight());
    CHECK(!w.invertible());
    CHECK(window_product(w, -2, 5).is_zero());
    CHECK(!window_product(w, 1, 5).is_zero());
}

TEST_CASE("cumulative log sums match direct accumulation") {
    std::mt19937_64 rng(20240815);
    std::uniform_int_distribution<std::int64_t> pick(-60, 60);
    std::uniform_int_distribution<std::int64_t> len(0, 40);

    for (const auto& w : {piecewise_sample(), WeightSequence::theorem_d(3.0),
                          WeightSequence::doubling_blocks(2.0),
                          WeightSequence::uniform_expansive_pair(2.0, 3.0)}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::int64_t k = pick(rng);
            std::int64_t n = len(rng);
            auto direct = oracle::direct_window_log(w, k, n);
            REQUIRE(direct.has_value());
            auto got = window_product(w, k, n);
            CHECK(got.log_abs() == doctest::Approx(*direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("doubling block exponents are exact") {
    auto w = WeightSequence::doubling_blocks(2.0);
    for (std::int64_t m = 0; m <= 300; ++m) {
        double direct = (m == 0) ? 0.0 : oracle::direct_window_log(w, -m, m).value();
        CHECK(static_cast<double>(doubling_left_exponent(m)) * std::log(2.0) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
    // block-sum landmarks: m_k = 4^k - 1 gives (1-4^k)/3, n_k = 2*4^k - 1 gives (1+2*4^k)/3
    CHECK(doubling_left_exponent(3) == -1);
    CHECK(doubling_left_exponent(15) == -5);
    CHECK(doubling_left_exponent(63) == -21);
    CHECK(doubling_left_exponent(7) == 3);
    CHECK(doubling_left_exponent(31) == 11);

    CHECK(w.window_exponent(-15, 15).value() == -5);
    CHECK(w.window_exponent(-7, 10).value() == 3 + 3);
    auto td = WeightSequence::theorem_d(2.0);
    CHECK(td.window_exponent(-3, 3).value() == 3);
    CHECK(td.window_exponent(0, 4).value() == -4);
    CHECK(td.window_exponent(-2, 5).value() == 2 - 3);
}

TEST_CASE("vector norms") {
    BiVector x;
    x.set(-2, Complex(3.0, 4.0)); // |.| = 5
    x.set(7, Complex(0.0, 12.0));
    CHECK(vector_norm(x, SpaceSpec::c0()) == doctest::Approx(12.0));
    CHECK(vector_norm(x, SpaceSpec::lp(1.0)) == doctest::Approx(17.0));
    CHECK(vector_norm(x, SpaceSpec::lp(2.0)) == doctest::Approx(13.0));
    CHECK(vector_norm(BiVector(), SpaceSpec::lp(2.0)) == 0.0);

    // c0 <= l2 <= l1 on any vector
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        BiVector v;
        for (int i = 0; i < 6; ++i) v.set(i - 3, Complex(u(rng), u(rng)));
        double c0 = vector_norm(v, SpaceSpec::c0());
        double l2 = vector_norm(v, SpaceSpec::lp(2.0));
        double l1 = vector_norm(v, SpaceSpec::lp(1.0));
        CHECK(c0 <= l2 + 1e-12);
        CHECK(l2 <= l1 + 1e-12);
    }
}

TEST_CASE("shift application and inverses") {
    auto w = WeightSequence::theorem_d(2.0);
    auto e0 = BiVector::basis(0);

    auto fwd = apply_shift(w, e0, Direction::forward);
    CHECK(fwd.at(1) == Complex(0.5, 0.0)); // w_0 = 1/2

    auto back = apply_shift(w, e0, Direction::backward);
    CHECK(back.at(-1) == Complex(0.5, 0.0)); // w_0 x_0 lands at -1

    auto finv = apply_shift(w, e0, Direction::forward, true);
    CHECK(finv.at(-1) == Complex(0.5, 0.0)); // e_{-1} / w_{-1}

    // roundtrip identity on a random vector
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BiVector x;
    for (int i = -4; i <= 4; ++i) x.set(i, Complex(u(rng), u(rng)));
    for (Direction d : {Direction::forward, Direction::backward}) {
        auto y = apply_shift(w, apply_shift(w, x, d), d, true);
        for (const auto& [i, v] : x.entries()) {
            CHECK(std::abs(y.at(i) - v) < 1e-14);
        }
        CHECK(y.support_size() == x.support_size());
    }
}

TEST_CASE("unilateral shifts: domain and annihilation") {
    WeightCore core;
    core.start_index = 1;
    core.values = {};
    auto w = WeightSequence::unilateral(core, {Complex(2.0, 0.0)});
    CHECK(!w.invertible());

    auto e1 = BiVector::basis(1);
    CHECK(apply_shift(w, e1, Direction::backward).empty()); // lowest coordinate dropped
    auto e2 = BiVector::basis(2);
    CHECK(apply_shift(w, e2, Direction::backward).at(1) == Complex(2.0, 0.0));
    CHECK(apply_shift(w, e1, Direction::forward).at(2) == Complex(2.0, 0.0));

    CHECK_THROWS_AS(apply_shift(w, BiVector::basis(0), Direction::forward),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_shift(w, e1, Direction::forward, true), std::invalid_argument);
}

TEST_CASE("orbit norms: split-geometric basis orbit decays both ways") {
    auto w = WeightSequence::theorem_d(2.0);
    auto pts = orbit_norms(w, BiVector::basis(0), SpaceSpec::lp(2.0), -5, 5);
    for (const auto& [n, mag] : pts) {
        CHECK(mag.value() == doctest::Approx(std::pow(2.0, -std::abs(double(n)))));
    }
}

TEST_CASE("orbit norms agree with materialized orbits") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& w : {piecewise_sample(), WeightSequence::theorem_d(2.0),
                          WeightSequence::doubling_blocks(2.0)}) {
        BiVector x;
        for (int i = -3; i <= 3; ++i) x.set(i, Complex(u(rng), u(rng)));
        for (Direction d : {Direction::forward, Direction::backward}) {
            for (const auto& space : {SpaceSpec::lp(1.0), SpaceSpec::lp(2.0), SpaceSpec::c0()}) {
                BiVector cur = x;
                for (int n = 0; n <= 6; ++n) {
                    double direct = vector_norm(cur, space);
                    double via_log = orbit_norm_at(w, x, space, n, d).value();
                    CHECK(via_log == doctest::Approx(direct).epsilon(1e-10));
                    cur = apply_shift(w, cur, d);
                }
                BiVector curinv = x;
                for (int n = 0; n >= -6; --n) {
                    double direct = vector_norm(curinv, space);
                    double via_log = orbit_norm_at(w, x, space, n, d).value();
                    CHECK(via_log == doctest::Approx(direct).epsilon(1e-10));
                    curinv = apply_shift(w, curinv, d, true);
                }
            }
        }
    }
}

TEST_CASE("orbit norms: log-domain far outside double range") {
    auto w = WeightSequence::uniform_expansive_pair(2.0, 2.0); // all weights 2
    auto mag = orbit_norm_at(w, BiVector::basis(0), SpaceSpec::lp(2.0), 5000);
    CHECK(!mag.is_infinite());
    CHECK(mag.log_abs() == doctest::Approx(5000.0 * std::log(2.0)));
}

TEST_CASE("description validation") {
    CHECK_THROWS_AS(WeightSequence::bilateral({}, WeightCore{}, {Complex(1.0, 0.0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        WeightSequence::bilateral({Complex(0.0, 0.0)}, WeightCore{}, {Complex(1.0, 0.0)}),
        std::invalid_argument);
    WeightCore c;
    c.start_index = 2;
    CHECK_THROWS_AS(WeightSequence::unilateral(c, {Complex(1.0, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence::doubling_blocks(1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence::theorem_d(0.5), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence::uniform_expansive_pair(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("geometric means of tails") {
    auto td = WeightSequence::theorem_d(2.0);
    CHECK(*td.log_gm_left() == doctest::Approx(std::log(2.0)));
    CHECK(td.log_gm_right() == doctest::Approx(-std::log(2.0)));

    // identity weights: exactly log-gm 0 on both sides
    auto one = WeightSequence::uniform_expansive_pair(1.0, 1.0);
    CHECK(*one.log_gm_left() == 0.0);
    CHECK(one.log_gm_right() == 0.0);
}
