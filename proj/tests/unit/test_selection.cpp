#include <doctest.h>

#include <array>
#include <cmath>

#include "kaczmarz/selection.hpp"

using namespace kaczmarz;

TEST_CASE("max weighted residual picks the largest ratio") {
    const Vector r{3.0, -4.0, 0.0};
    const Vector norms{1.0, 2.0, 1.0};
    // weights |r_i|/sqrt(M(i)): 3, 4/sqrt(2) ~ 2.828, 0
    const auto pick = select_max_weighted_residual(r, norms);
    REQUIRE(pick.has_value());
    CHECK(*pick == 0);
}

TEST_CASE("max weighted residual: single nonzero entry wins") {
    const Vector r{0.0, 0.0, 0.7, 0.0};
    const Vector norms{1.0, 4.0, 2.0, 3.0};
    CHECK(*select_max_weighted_residual(r, norms) == 2);
}

TEST_CASE("max weighted residual ties break to the lowest index") {
    const Vector r{1.0, 1.0};
    const Vector norms{1.0, 1.0};
    CHECK(*select_max_weighted_residual(r, norms) == 0);
}

TEST_CASE("max weighted residual signals convergence on zero residual") {
    const Vector r{0.0, 0.0};
    const Vector norms{1.0, 1.0};
    CHECK_FALSE(select_max_weighted_residual(r, norms).has_value());
}

TEST_CASE("max weighted residual is invariant under per-row scaling") {
    RngStream rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        Vector r(8), norms(8), r2(8), norms2(8);
        for (std::size_t i = 0; i < 8; ++i) {
            r[i] = rng.uniform(-1.0, 1.0);
            norms[i] = rng.uniform(0.1, 3.0);
            const double c = rng.uniform(0.2, 5.0);
            r2[i] = c * r[i];
            norms2[i] = c * c * norms[i];
        }
        CHECK(select_max_weighted_residual(r, norms) ==
              select_max_weighted_residual(r2, norms2));
    }
}

TEST_CASE("greedy set: worked 3-row instance") {
    const Vector r{2.0, 1.0, 0.0};
    const Vector norms{1.0, 1.0, 1.0};
    const auto sel = build_greedy_set(r, norms, 3.0);
    REQUIRE(sel.has_value());
    // ||r||^2 = 5, best ratio = 4/5, threshold parameter = (4/5 + 1/3)/2 = 17/30
    CHECK(sel->rel_threshold == doctest::Approx(17.0 / 30.0).epsilon(1e-15));
    REQUIRE(sel->index_set.size() == 1);
    CHECK(sel->index_set[0] == 0);
    CHECK(sel->truncated_residual_sq_sum == doctest::Approx(4.0));
}

TEST_CASE("greedy set: single nonzero residual entry") {
    const Vector r{0.0, 0.0, -0.3};
    const Vector norms{1.0, 1.0, 1.0};
    const auto sel = build_greedy_set(r, norms, 3.0);
    REQUIRE(sel.has_value());
    REQUIRE(sel->index_set.size() == 1);
    CHECK(sel->index_set[0] == 2);
}

TEST_CASE("greedy set: equal ratios keep every row") {
    const Vector r{1.0, -1.0, 1.0, -1.0};
    const Vector norms{1.0, 1.0, 1.0, 1.0};
    const auto sel = build_greedy_set(r, norms, 4.0);
    REQUIRE(sel.has_value());
    CHECK(sel->index_set.size() == 4);  // membership uses >=
    CHECK(sel->truncated_residual_sq_sum == doctest::Approx(4.0));
}

TEST_CASE("greedy set: zero residual signals convergence") {
    const Vector r{0.0, 0.0};
    const Vector norms{1.0, 1.0};
    CHECK_FALSE(build_greedy_set(r, norms, 2.0).has_value());
}

TEST_CASE("greedy set always contains the maximizing row") {
    RngStream rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Vector r(10), norms(10);
        double frob = 0.0;
        for (std::size_t i = 0; i < 10; ++i) {
            r[i] = rng.uniform(-2.0, 2.0);
            norms[i] = rng.uniform(0.1, 4.0);
            frob += norms[i];
        }
        const auto sel = build_greedy_set(r, norms, frob);
        REQUIRE(sel.has_value());
        const auto best = select_max_weighted_residual(r, norms);
        REQUIRE(best.has_value());
        bool found = false;
        for (std::size_t i : sel->index_set) found = found || i == *best;
        CHECK(found);
        // Threshold parameter never drops below half the inverse Frobenius mass.
        CHECK(sel->rel_threshold >= 1.0 / (2.0 * frob) * (1.0 - 1e-12));
    }
}

TEST_CASE("greedy sampling: singleton set is deterministic") {
    GreedySelection sel;
    sel.index_set = {3};
    sel.truncated_residual_sq_sum = 2.25;
    const Vector r{0.0, 0.0, 0.0, -1.5};
    RngStream rng(1);
    for (int k = 0; k < 10; ++k) CHECK(sample_from_greedy_set(sel, r, rng) == 3);
}

TEST_CASE("greedy sampling matches the squared-residual distribution") {
    const Vector r{1.0, -std::sqrt(3.0)};
    GreedySelection sel;
    sel.index_set = {0, 1};
    sel.truncated_residual_sq_sum = 4.0;
    RngStream rng(2024);
    std::array<int, 2> hits{0, 0};
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) ++hits[sample_from_greedy_set(sel, r, rng)];
    CHECK(static_cast<double>(hits[0]) / draws == doctest::Approx(0.25).epsilon(0.04));
    CHECK(static_cast<double>(hits[1]) / draws == doctest::Approx(0.75).epsilon(0.0134));
}

TEST_CASE("greedy sampling: uniform residual over four rows") {
    const Vector r{0.5, 0.5, 0.5, 0.5};
    GreedySelection sel;
    sel.index_set = {0, 1, 2, 3};
    sel.truncated_residual_sq_sum = 1.0;
    RngStream rng(99);
    std::array<int, 4> hits{};
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) ++hits[sample_from_greedy_set(sel, r, rng)];
    for (int h : hits)
        CHECK(static_cast<double>(h) / draws == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("uniform first index") {
    RngStream one(5);
    CHECK(select_first_index_uniform(1, one) == 0);

    RngStream rng(7);
    std::array<int, 10> hits{};
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) ++hits[select_first_index_uniform(10, rng)];
    for (int h : hits)
        CHECK(static_cast<double>(h) / draws == doctest::Approx(0.1).epsilon(0.1));

    RngStream a(123), b(123);
    for (int k = 0; k < 100; ++k)
        CHECK(select_first_index_uniform(17, a) == select_first_index_uniform(17, b));

    RngStream c(1);
    CHECK_THROWS_AS(select_first_index_uniform(0, c), std::invalid_argument);
}

TEST_CASE("cyclic index") {
    CHECK(select_cyclic(0, 5) == 0);
    CHECK(select_cyclic(7, 5) == 2);
    CHECK(select_cyclic(5, 5) == 0);
}
