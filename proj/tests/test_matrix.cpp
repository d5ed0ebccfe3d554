#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "lindyn/matrix.hpp"
#include "random_normal.hpp"

using namespace lindyn;

namespace {

double snorm(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double smin(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

const std::complex<double> kI(0.0, 1.0);

} // namespace

TEST_CASE("matrix operator construction and validation") {
    CHECK_THROWS_AS(MatrixOp(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(MatrixOp(Eigen::MatrixXcd::Zero(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(MatrixOp(Eigen::MatrixXcd::Zero(65, 65)), std::invalid_argument);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(MatrixOp(std::move(bad)), std::invalid_argument);

    MatrixOp d = MatrixOp::diagonal({2.0, 0.5});
    CHECK(d.dim() == 2);
    CHECK(d.op_norm() == 2.0);
    CHECK(d.min_singular_value() == 0.5);
    CHECK(d.is_normal());

    MatrixOp j = MatrixOp::jordan_block(0.5, 3);
    CHECK(!j.is_normal());
    CHECK(j.entries()(1, 0) == std::complex<double>(1.0, 0.0));
    CHECK(j.entries()(0, 1) == std::complex<double>(0.0, 0.0));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(j.eigenvalues()(i) - 0.5) < 1e-12);

    CHECK(MatrixOp::rotation(1.0).is_normal());
    CHECK(MatrixOp::identity(3).is_normal());
}

TEST_CASE("unit circle hyperbolicity has three regimes") {
    Verdict t = is_hyperbolic_matrix(MatrixOp::diagonal({2.0, 0.5}));
    CHECK(t.value == Truth::True);
    CHECK(t.provenance == Provenance::exact);

    // the rotation recovers both eigenvalue moduli as exactly 1
    Verdict rot = is_hyperbolic_matrix(MatrixOp::rotation(1.0));
    CHECK(rot.value == Truth::False);
    CHECK(rot.provenance == Provenance::exact);

    CHECK(is_hyperbolic_matrix(MatrixOp::diagonal({1.0})).value == Truth::False);
    CHECK(is_hyperbolic_matrix(MatrixOp::jordan_block(0.5, 2)).value == Truth::True);

    // on the circle at numeric precision: decided False, not Undetermined
    CHECK(is_hyperbolic_matrix(MatrixOp::diagonal({1.0 - 2e-15})).value == Truth::False);

    // inside the dead band: stays open at the default width, decided at a
    // narrower one
    MatrixOp close = MatrixOp::diagonal({1.0 + 1e-12, 2.0});
    CHECK(is_hyperbolic_matrix(close).value == Truth::Undetermined);
    CHECK(is_hyperbolic_matrix(close, 1e-13).value == Truth::True);
}

TEST_CASE("splitting an exactly geometric diagonal stays exact") {
    SpectralSplit sp = hyperbolic_splitting(MatrixOp::diagonal({2.0, 0.5}));
    CHECK(sp.stable_dim() == 1);
    CHECK(sp.unstable_dim() == 1);
    CHECK(sp.stable_block(0, 0) == std::complex<double>(0.5, 0.0));
    CHECK(sp.unstable_block(0, 0) == std::complex<double>(2.0, 0.0));
    CHECK(std::abs(sp.stable_basis(1, 0)) == 1.0);
    CHECK(std::abs(sp.stable_basis(0, 0)) == 0.0);
    CHECK(std::abs(sp.unstable_basis(0, 0)) == 1.0);
    CHECK(sp.beta == 1.0);
    CHECK(sp.stable_power.rate == 0.5);
    CHECK(sp.stable_power.scale == 1.0);
    CHECK(sp.stable_power.n_check == 1);
    CHECK(sp.unstable_power.rate == 0.5);
    CHECK(sp.unstable_power.scale == 1.0);
    CHECK(sp.stable_margin == 0.5);
    CHECK(sp.unstable_margin == 1.0);
}

TEST_CASE("splitting bounds a defective stable block") {
    SpectralSplit sp = hyperbolic_splitting(MatrixOp::jordan_block(0.5, 2));
    CHECK(sp.stable_dim() == 2);
    CHECK(sp.unstable_dim() == 0);
    // the spectral radius itself cannot bound a Jordan cell; the quarter-gap
    // candidate is the first that does
    CHECK(sp.stable_power.rate == 0.625);
    CHECK(sp.stable_power.scale == doctest::Approx(3.3272240642529956));
    CHECK(sp.stable_power.n_check == 16);
    CHECK(sp.beta == doctest::Approx(1.0));
    CHECK(sp.unstable_power.rate == 0.0);
    CHECK(sp.unstable_power.scale == 0.0);

    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd j = MatrixOp::jordan_block(0.5, 2).entries();
    for (int n = 1; n <= 64; ++n) {
        p = p * j;
        CHECK(snorm(p) <= sp.stable_power.scale * std::pow(sp.stable_power.rate, n) * (1 + 1e-12));
    }
}

TEST_CASE("splitting separates coupled directions") {
    Eigen::MatrixXcd c(2, 2);
    c << 2.0, 1.0, 0.0, 0.5;
    SpectralSplit sp = hyperbolic_splitting(MatrixOp(c));
    CHECK(sp.stable_dim() == 1);
    CHECK(sp.unstable_dim() == 1);
    // stable direction is the 0.5-eigenvector, unstable is the first axis
    Eigen::VectorXcd ws = sp.stable_basis.col(0);
    CHECK((c * ws - 0.5 * ws).norm() < 1e-12);
    CHECK(std::abs(sp.unstable_basis(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(sp.unstable_basis(1, 0)) < 1e-12);
    // the projectors are oblique here
    CHECK(sp.beta == doctest::Approx(1.2018504251546633));
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(2, 2);
    CHECK((sp.p_stable + sp.p_unstable - eye).norm() < 1e-10);
    CHECK((sp.p_stable * sp.p_unstable).norm() < 1e-10);
    CHECK((sp.p_unstable * c * sp.p_stable).norm() < 1e-10);
    CHECK(sp.stable_margin == doctest::Approx(0.5));
    CHECK(sp.unstable_margin == doctest::Approx(1.0));
}

TEST_CASE("splitting handles one-sided spectra and rejects the circle") {
    CHECK_THROWS_AS(hyperbolic_splitting(MatrixOp::rotation(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(hyperbolic_splitting(MatrixOp::diagonal({1.0 + 1e-12})), std::invalid_argument);

    SpectralSplit up = hyperbolic_splitting(MatrixOp::diagonal({2.0}));
    CHECK(up.stable_dim() == 0);
    CHECK(up.unstable_dim() == 1);
    CHECK(up.unstable_power.rate == 0.5);
    CHECK(up.unstable_power.scale == 1.0);
    CHECK(up.stable_power.rate == 0.0);
    CHECK(up.beta == 1.0);
    CHECK(up.stable_margin == 1.0);

    SpectralSplit down = hyperbolic_splitting(MatrixOp::diagonal({0.5}));
    CHECK(down.stable_dim() == 1);
    CHECK(down.unstable_dim() == 0);
    CHECK(down.stable_power.rate == 0.5);
    CHECK(down.unstable_margin == 1.0);
}

TEST_CASE("normal expansivity verdicts from the spectrum") {
    NormalExpansivityReport r = normal_expansive(MatrixOp::diagonal({1.0, 2.0}));
    CHECK(r.expansive.value == Truth::False);
    CHECK(r.expansive.provenance == Provenance::exact);
    CHECK(r.positively_expansive.value == Truth::False);
    CHECK(r.uniformly_positively_expansive.value == Truth::False);
    CHECK(r.uniformly_expansive.value == Truth::False);

    r = normal_expansive(MatrixOp::diagonal({2.0, 3.0 * kI}));
    CHECK(r.expansive.value == Truth::True);
    CHECK(r.positively_expansive.value == Truth::True);
    CHECK(r.uniformly_positively_expansive.value == Truth::True);
    CHECK(r.uniformly_expansive.value == Truth::True);

    r = normal_expansive(MatrixOp::diagonal({0.5, 2.0}));
    CHECK(r.expansive.value == Truth::True);
    CHECK(r.positively_expansive.value == Truth::False);
    CHECK(r.uniformly_positively_expansive.value == Truth::False);
    CHECK(r.uniformly_expansive.value == Truth::True);

    // inside the dead band everything stays open
    r = normal_expansive(MatrixOp::diagonal({1.0 + 1e-10, 2.0}));
    CHECK(r.expansive.value == Truth::Undetermined);
    CHECK(r.positively_expansive.value == Truth::Undetermined);
    CHECK(r.uniformly_positively_expansive.value == Truth::Undetermined);
    CHECK(r.uniformly_expansive.value == Truth::Undetermined);

    // a singular operator has no two-sided orbits to test
    r = normal_expansive(MatrixOp::diagonal({0.0, 2.0}));
    CHECK(r.expansive.value == Truth::Undetermined);
    CHECK(r.uniformly_expansive.value == Truth::Undetermined);
    CHECK(r.positively_expansive.value == Truth::False);
    CHECK(r.uniformly_positively_expansive.value == Truth::False);

    CHECK_THROWS_AS(normal_expansive(MatrixOp::jordan_block(0.5, 2)), std::invalid_argument);
}

TEST_CASE("pivot pseudotrajectories with summable defects diverge") {
    MatrixOp one = MatrixOp::jordan_block(1.0, 1);

    SUBCASE("square-summable defects, harmonic drift") {
        auto c = fd1_counterexample(one, CounterexampleMode::lp, 10000);
        CHECK(c.points.size() == 10001);
        CHECK(c.defects.size() == 10000);
        CHECK(c.defect_norms[0] == 1.0);
        CHECK(c.defect_norms[9] == 1.0 / 10.0);
        CHECK(c.defect_sup == 1.0);
        // sum of 1/m^2 stays under pi^2/6
        CHECK(c.defect_power_sum > 1.6448);
        CHECK(c.defect_power_sum < 1.6449340668482264);
        // same-order harmonic accumulation reproduces the drift bit for bit
        double h = 0.0;
        for (int m = 1; m <= 10000; ++m) h += 1.0 / m;
        CHECK(c.pivot_drift.back() == h);
        CHECK(c.divergence_minimax == 0.5 * h);
        CHECK(c.pivot_drift[10000] - c.pivot_drift[5000] >= 0.69);
    }

    SUBCASE("absolutely summable defects still force divergence") {
        auto c = fd1_counterexample(one, CounterexampleMode::l1, 1000);
        CHECK(c.defect_norms[0] == 1.0);
        CHECK(c.defect_norms[5] == 1.0 / 30.0);
        CHECK(c.defect_power_sum == doctest::Approx(2.0 - 1.0 / 1000.0));
        // the window functional is a sum; its exact optimum sits at a median
        std::vector<double> sorted = c.pivot_drift;
        std::sort(sorted.begin(), sorted.end());
        double med = sorted[sorted.size() / 2];
        double total = 0.0;
        for (double v : c.pivot_drift) total += std::abs(v - med);
        CHECK(c.divergence_minimax == total);
        CHECK(c.divergence_minimax == doctest::Approx(6.1021720074147243));
        auto c2 = fd1_counterexample(one, CounterexampleMode::l1, 2000);
        CHECK(c2.divergence_minimax > c.divergence_minimax);
    }

    SUBCASE("constant-delta ramp with exact arithmetic") {
        auto c = fd1_counterexample(one, CounterexampleMode::positive, 100, 2.0, 0.1);
        for (double nrm : c.defect_norms) CHECK(nrm == 0.1);
        CHECK(c.defect_sup == 0.1);
        CHECK(c.pivot_drift.back() == 10.0);
        CHECK(c.divergence_minimax == 5.0);
        CHECK(c.divergence_minimax >= 5.0);
    }

    SUBCASE("a unimodular twist changes nothing the norms can see") {
        Eigen::MatrixXcd tw(2, 2);
        tw << kI, 0.0, 1.0, kI;
        auto c = fd1_counterexample(MatrixOp(tw), CounterexampleMode::lp, 50);
        CHECK(c.pivot == 0);
        CHECK(c.lambda == kI);
        // the pivot row of A / lambda is exactly a coordinate row
        Eigen::MatrixXcd b = tw / c.lambda;
        CHECK(b(0, 0) == std::complex<double>(1.0, 0.0));
        CHECK(b(0, 1) == std::complex<double>(0.0, 0.0));
        // stored closed-form defects match a recomputation from the points
        for (std::size_t n = 0; n + 1 < c.points.size(); ++n) {
            Eigen::VectorXcd rec = c.points[n + 1] - b * c.points[n];
            CHECK((rec - c.defects[n]).norm() < 1e-14);
        }
        auto plain = fd1_counterexample(one, CounterexampleMode::lp, 50);
        for (std::size_t n = 0; n < 50; ++n) CHECK(c.defect_norms[n] == plain.defect_norms[n]);
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(fd1_counterexample(MatrixOp::diagonal({2.0, 0.5}),
                                           CounterexampleMode::lp, 10),
                        std::domain_error);
        CHECK_THROWS_AS(fd1_counterexample(one, CounterexampleMode::lp, 0), std::invalid_argument);
        CHECK_THROWS_AS(fd1_counterexample(one, CounterexampleMode::lp, 10, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(fd1_counterexample(one, CounterexampleMode::positive, 10, 2.0, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("unit defects along a unimodular eigendirection defeat any constant") {
    MatrixOp rot = MatrixOp::rotation(1.0);
    auto r = refute_shadowing(rot, 100);
    CHECK(r.lower_bound == 100.0);
    CHECK(r.defect_sup == 1.0);
    CHECK(r.two_sided);
    CHECK(r.residual < 1e-12);
    CHECK(std::abs(std::abs(r.lambda) - 1.0) < 1e-13);

    auto half = refute_shadowing(rot, 100, false);
    CHECK(half.lower_bound == 50.0);

    auto fix = refute_shadowing(MatrixOp::diagonal({1.0}), 10);
    CHECK(fix.lower_bound == 10.0);
    CHECK(fix.residual == 0.0);

    // the obstruction scales linearly with the window
    CHECK(refute_shadowing(rot, 200).lower_bound == 2.0 * r.lower_bound);
    CHECK(refute_shadowing(rot, 400).lower_bound == 4.0 * r.lower_bound);

    CHECK_THROWS_AS(refute_shadowing(MatrixOp::diagonal({2.0, 0.5}), 100), std::domain_error);
    CHECK_THROWS_AS(refute_shadowing(rot, 0), std::invalid_argument);
}

TEST_CASE("irregular vector probe on matrix orbits") {
    ClassifierConfig cfg;
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.0, 1e-9, 3.0;
    MatrixOp a(m);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = 1.0;

    // the first coordinate decays as 2^-n while the leaked second coordinate
    // grows as 3^n from a 1e-9 seed: the orbit dips, then climbs
    auto w = irregular_vector_probe(a, {e1}, cfg);
    REQUIRE(w.has_value());
    CHECK(w->candidate == 0);
    CHECK(w->n_low == 10);
    CHECK(w->n_high == 26);
    CHECK(w->log_norm_low <= std::log(cfg.probe_floor));
    CHECK(w->log_norm_high >= std::log(cfg.probe_ceiling));

    // zero candidates are skipped, not probed
    auto skip = irregular_vector_probe(a, {Eigen::VectorXcd::Zero(2), e1}, cfg);
    REQUIRE(skip.has_value());
    CHECK(skip->candidate == 1);

    Eigen::VectorXcd ones2 = Eigen::VectorXcd::Ones(2);
    Eigen::VectorXcd ones1 = Eigen::VectorXcd::Ones(1);
    CHECK(!irregular_vector_probe(MatrixOp::rotation(1.0), {ones2}, cfg));
    CHECK(!irregular_vector_probe(MatrixOp::diagonal({3.0}), {ones1}, cfg));
    CHECK(!irregular_vector_probe(MatrixOp::diagonal({0.5}), {ones1}, cfg));
    CHECK(!irregular_vector_probe(MatrixOp::diagonal({0.5, 3.0}), {ones2}, cfg));

    CHECK_THROWS_AS(irregular_vector_probe(a, {ones1}, cfg), std::invalid_argument);
}

TEST_CASE("powers of an everywhere-expanding matrix eventually expand uniformly") {
    // defective case: the nilpotent part delays the expansion but cannot
    // stop it
    MatrixOp j = MatrixOp::jordan_block(1.2, 4);
    std::int64_t first = 0;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(4, 4);
    for (std::int64_t n = 1; n <= 200 && first == 0; ++n) {
        p = p * j.entries();
        if (smin(p) > 2.0) first = n;
    }
    CHECK(first == 59);

    MatrixOp d = MatrixOp::diagonal({1.25, 3.0 * kI});
    CHECK(normal_expansive(d).uniformly_positively_expansive.value == Truth::True);
    p = Eigen::MatrixXcd::Identity(2, 2);
    first = 0;
    for (std::int64_t n = 1; n <= 200 && first == 0; ++n) {
        p = p * d.entries();
        if (smin(p) > 2.0) first = n;
    }
    CHECK(first == 4);
}

TEST_CASE("random normal matrices agree with the spectral classifier") {
    std::mt19937_64 rng(20240817u);
    std::uniform_int_distribution<int> dims(1, 8);
    for (int trial = 0; trial < 50; ++trial) {
        const bool allow_circle = trial % 2 == 1;
        auto eigs = testutil::random_spectrum(rng, dims(rng), allow_circle);
        MatrixOp a = testutil::random_normal(rng, eigs);
        REQUIRE(a.is_normal());
        NormalExpansivityReport r = normal_expansive(a);
        // both verdicts classify the same eigenvalue moduli
        CHECK(r.uniformly_expansive.value == is_hyperbolic_matrix(a).value);
        if (!allow_circle) {
            CHECK(r.uniformly_expansive.value != Truth::Undetermined);
            CHECK(r.expansive.value == r.uniformly_expansive.value);
            bool all_above = true;
            for (auto lam : eigs)
                if (std::abs(lam) < 1.0) all_above = false;
            CHECK((r.uniformly_positively_expansive.value == Truth::True) == all_above);
            CHECK((r.positively_expansive.value == Truth::True) == all_above);
        }
    }
}
