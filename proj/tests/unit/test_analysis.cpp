#include <doctest.h>

#include <cmath>
#include <limits>

#include "kaczmarz/analysis.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problems.hpp"
#include "kaczmarz/rng.hpp"
#include "kaczmarz/solve.hpp"

using namespace kaczmarz;

namespace {

SparseRowMatrix identity(std::size_t n) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return SparseRowMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("constants of the 2x2 identity") {
    const auto c = compute_constants(identity(2));
    CHECK(c.frob_norm_sq == doctest::Approx(2.0));
    CHECK(c.gamma1 == doctest::Approx(1.0));
    CHECK_FALSE(c.gamma2.has_value());  // needs at least 3 rows
    REQUIRE(c.delta.has_value());
    CHECK(*c.delta == doctest::Approx(1.0));
    CHECK(c.lambda_min_nz == doctest::Approx(1.0));

    const auto f = bound_factors(c);
    CHECK(f.zeta0 == doctest::Approx(0.75));
    CHECK_FALSE(f.zeta_k.has_value());
    CHECK_FALSE(f.rho_k.has_value());
}

TEST_CASE("constants and factors of the 3x3 identity") {
    const auto c = compute_constants(identity(3));
    CHECK(c.gamma1 == doctest::Approx(2.0));
    REQUIRE(c.gamma2.has_value());
    CHECK(*c.gamma2 == doctest::Approx(1.0));
    REQUIRE(c.delta.has_value());
    CHECK(*c.delta == doctest::Approx(1.0));
    CHECK(c.lambda_min_nz == doctest::Approx(1.0));

    const auto f = bound_factors(c);
    CHECK(f.rho0 == doctest::Approx(2.0 / 3.0));
    REQUIRE(f.rho1.has_value());
    CHECK(*f.rho1 == doctest::Approx(0.5));
    REQUIRE(f.rho_k.has_value());
    CHECK(*f.rho_k == doctest::Approx(0.0));
    CHECK(f.zeta0 == doctest::Approx(1.0 - 1.0 / 9.0));
    REQUIRE(f.zeta_k.has_value());
    CHECK(*f.zeta_k == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(f.negative_factor);
}

TEST_CASE("duplicated row: smallest nonzero eigenvalue skips the zero") {
    const auto a = SparseRowMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 0, 1.0}});
    const auto c = compute_constants(a);
    CHECK(c.lambda_min_nz == doctest::Approx(2.0));
}

TEST_CASE("gamma1 two ways agree on random matrices") {
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = gen_uniform(20, 8, 0.0, 400 + trial);
        const auto c = compute_constants(a);
        double direct = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double sum = 0.0;
            for (std::size_t s = 0; s < a.rows(); ++s)
                if (s != i) sum += a.row_norm_sq(s);
            direct = std::max(direct, sum);
        }
        CHECK(c.gamma1 == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("delta is invariant under row normalization") {
    const auto a = gen_uniform(15, 6, 0.3, 9);
    const Vector b(15, 1.0);
    const auto [na, nb] = normalize_rows(a, b);
    const auto c_raw = compute_constants(a);
    const auto c_unit = compute_constants(na);
    REQUIRE(c_raw.delta.has_value());
    REQUIRE(c_unit.delta.has_value());
    CHECK(*c_raw.delta == doctest::Approx(*c_unit.delta).epsilon(1e-10));
}

TEST_CASE("lambda_min_nz bounds the action of A on the row space") {
    const auto a = gen_uniform(18, 7, 0.0, 12);
    const auto c = compute_constants(a);
    RngStream rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        // u = A^T z lies in the row space.
        Vector z(a.rows());
        for (double& v : z) v = rng.uniform(-1.0, 1.0);
        Vector u(a.cols(), 0.0);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const auto idx = a.row_indices(i);
            const auto val = a.row_values(i);
            for (std::size_t k = 0; k < idx.size(); ++k) u[idx[k]] += z[i] * val[k];
        }
        const Vector au = a.multiply(u);
        CHECK(vec::norm_sq(au) >= (c.lambda_min_nz - 1e-8) * vec::norm_sq(u));
    }
}

TEST_CASE("oblique factors beat the orthogonal baselines (rows >= 3)") {
    for (int trial = 0; trial < 6; ++trial) {
        const auto a = gen_uniform(10 + trial, 6, 0.1 * trial, 500 + trial);
        const auto f = bound_factors(compute_constants(a));
        REQUIRE(f.zeta_k.has_value());
        REQUIRE(f.rho_k.has_value());
        CHECK(*f.rho_k < *f.zeta_k);
        REQUIRE(f.rho1.has_value());
        REQUIRE(f.zeta1.has_value());
        CHECK(*f.rho1 <= *f.zeta1);
    }
}

TEST_CASE("pair-scan limit suppresses delta") {
    const auto a = gen_uniform(10, 4, 0.0, 21);
    AnalysisOptions opts;
    opts.pair_scan_row_limit = 5;
    const auto c = compute_constants(a, opts);
    CHECK_FALSE(c.delta.has_value());
    const auto f = bound_factors(c);
    CHECK_FALSE(f.zeta1.has_value());
    CHECK_FALSE(f.rho_k.has_value());
    CHECK(f.zeta0 > 0.0);  // delta-free factors still come out
}

TEST_CASE("negative factors are surfaced, not clamped") {
    ConvergenceConstants c;
    c.rows = 3;
    c.frob_norm_sq = 3.0;
    c.gamma1 = 2.0;
    c.gamma2 = 1.0;
    c.delta = 0.1;        // fabricated: outside the bounds' regime
    c.lambda_min_nz = 1.0;
    const auto f = bound_factors(c);
    REQUIRE(f.rho_k.has_value());
    CHECK(*f.rho_k < 0.0);
    CHECK(f.negative_factor);
}

TEST_CASE("contraction check: 3x3 identity run has no violations") {
    const auto eye = identity(3);
    const Vector b{1.0, 2.0, 3.0};
    const Vector x_ref = least_norm_solution(eye, b);

    std::vector<double> err_sq;
    err_sq.push_back(vec::norm_sq(x_ref));  // x starts at zero
    SolverConfig cfg;
    cfg.method = Method::Mwrko;
    const auto obs = [&](const StepEvent& ev) {
        double e = 0.0;
        for (std::size_t i = 0; i < ev.x.size(); ++i)
            e += (ev.x[i] - x_ref[i]) * (ev.x[i] - x_ref[i]);
        err_sq.push_back(e);
    };
    const SolveReport rep = solve(eye, b, cfg, obs);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 3);
    CHECK(err_sq.back() <= 1e-20);

    const auto f = bound_factors(compute_constants(eye));
    const auto report = check_contraction(err_sq, f, ContractionMode::PerStepRho);
    CHECK(report.violations.empty());
    CHECK(report.steps_checked == err_sq.size() - 1);
}

TEST_CASE("contraction check: all-zero history is clean") {
    const auto f = bound_factors(compute_constants(identity(3)));
    const std::vector<double> hist{0.0, 0.0, 0.0, 0.0};
    CHECK(check_contraction(hist, f, ContractionMode::PerStepRho).violations.empty());
}

TEST_CASE("contraction check flags a synthetic violation") {
    const auto f = bound_factors(compute_constants(identity(3)));
    // rho factors are 2/3, 1/2, 0: decay by 0.1 per step obeys the first two
    // and breaks the steady-state bound exactly once at step 5.
    std::vector<double> hist{1.0, 0.1, 0.01};
    for (int k = 0; k < 3; ++k) hist.push_back(0.0);
    hist.push_back(1e-9);  // rises from zero at step 5
    const auto report = check_contraction(hist, f, ContractionMode::PerStepRho);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].step == 5);
}

TEST_CASE("contraction check: cumulative mode needs zeta factors") {
    const auto f = bound_factors(compute_constants(identity(2)));  // no zeta_k
    const std::vector<double> hist{1.0, 0.5};
    CHECK_THROWS_AS(check_contraction(hist, f, ContractionMode::CumulativeZeta),
                    std::invalid_argument);
}
