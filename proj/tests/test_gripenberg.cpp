#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "jsr/apps.hpp"
#include "jsr/gripenberg.hpp"

using namespace jsr;

namespace {

MatrixSet random_pair(std::mt19937_64& rng, int s) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Matrix> mats;
    for (int k = 0; k < 2; ++k) {
        Matrix m(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) m(i, j) = g(rng);
        mats.push_back(m);
    }
    return MatrixSet(mats);
}

ProductWord word(std::vector<int> idx) {
    ProductWord w;
    w.indices = std::move(idx);
    return w;
}

}  // namespace

TEST_CASE("modified_gripenberg: C15 finds the long s.m.p.") {
    MatrixSet set = fixture("C15");
    SearchReport r = modified_gripenberg(set, 10, 20);
    CHECK(r.lower_bound == doctest::Approx(std::exp(1.0 / 15.0)).epsilon(1e-9));
    std::vector<int> expect(15, 1);
    expect.push_back(2);
    bool found = false;
    for (const auto& c : r.candidates) found |= (c == word(expect));
    CHECK(found);
}

TEST_CASE("modified_gripenberg: singleton {2I}") {
    MatrixSet set({2.0 * Matrix::Identity(2, 2)});
    SearchReport r = modified_gripenberg(set, 5, 10);
    CHECK(r.lower_bound == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(!r.candidates.empty());
    CHECK(r.candidates.front() == word({1}));
}

TEST_CASE("modified_gripenberg: soundness of reported rho_c") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        MatrixSet set = random_pair(rng, 3);
        SearchReport r = modified_gripenberg(set, 6, 12);
        REQUIRE(!r.candidates.empty());
        double best = 0.0;
        for (const auto& c : r.candidates)
            best = std::max(best, normalized_spectral_radius(set, c));
        CHECK(best == doctest::Approx(r.lower_bound).epsilon(1e-10));
    }
}

TEST_CASE("modified_gripenberg: monotone in N and D") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 6; ++trial) {
        MatrixSet set = random_pair(rng, 3);
        double base = modified_gripenberg(set, 4, 8).lower_bound;
        CHECK(modified_gripenberg(set, 4, 16).lower_bound >= base - 1e-12);
        CHECK(modified_gripenberg(set, 8, 8).lower_bound >= base - 1e-12);
    }
}

TEST_CASE("modified_gripenberg: evaluation budget 2*N*J*D + J") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 8; ++trial) {
        MatrixSet set = random_pair(rng, 2 + 2 * (trial % 2));
        int n = 3 + trial, d = 5 + trial;
        SearchReport r = modified_gripenberg(set, n, d);
        CHECK(r.evaluations <= 2LL * n * set.count() * d + set.count());
    }
}

TEST_CASE("random_modified_gripenberg: seed-deterministic and sound") {
    std::mt19937_64 rng(61);
    MatrixSet set = random_pair(rng, 3);
    SearchReport a = random_modified_gripenberg(set, 5, 10, 42);
    SearchReport b = random_modified_gripenberg(set, 5, 10, 42);
    CHECK(a.lower_bound == b.lower_bound);
    CHECK(a.evaluations == b.evaluations);
    REQUIRE(a.candidates.size() == b.candidates.size());
    for (size_t i = 0; i < a.candidates.size(); ++i) CHECK(a.candidates[i] == b.candidates[i]);
    double best = 0.0;
    for (const auto& c : a.candidates)
        best = std::max(best, normalized_spectral_radius(set, c));
    CHECK(best == doctest::Approx(a.lower_bound).epsilon(1e-10));
}

TEST_CASE("classic_gripenberg: certified interval on random 2x2 pairs") {
    std::mt19937_64 rng(67);
    const double delta_acc = 0.9;
    for (int trial = 0; trial < 8; ++trial) {
        MatrixSet set = random_pair(rng, 2);
        SearchReport r = classic_gripenberg(set, delta_acc, 40);
        REQUIRE(r.upper_bound.has_value());
        CHECK(r.upper_final);  // frontier emptied within the cap
        CHECK(r.lower_bound <= *r.upper_bound + 1e-12);
        CHECK(r.lower_bound >= delta_acc * *r.upper_bound - 1e-9);
    }
}

TEST_CASE("classic_gripenberg: trivial exact case") {
    MatrixSet set({2.0 * Matrix::Identity(2, 2)});
    SearchReport r = classic_gripenberg(set, 0.99, 30);
    CHECK(r.lower_bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(*r.upper_bound == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("brute_force_bounds: ordering and the ex_rho example") {
    MatrixSet set = fixture("ex_rho");
    // the pair {A, B} alone has JSR 1 (B = 3A/4, rho(A) = 1)
    MatrixSet pair({set.at(1), set.at(3)});
    CHECK(brute_force_bounds(pair, 8).lower == doctest::Approx(1.0).epsilon(1e-10));
    // the full quadruple {A, A', B, B'} contains A'A: JSR = golden ratio
    JsrBounds b = brute_force_bounds(set, 8);
    CHECK(b.lower == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-10));
    CHECK(b.lower <= b.upper + 1e-12);

    std::mt19937_64 rng(71);
    MatrixSet r = random_pair(rng, 3);
    JsrBounds rb = brute_force_bounds(r, 5);
    CHECK(rb.lower <= rb.upper + 1e-12);
    // deeper search can only improve both endpoints
    JsrBounds rb6 = brute_force_bounds(r, 6);
    CHECK(rb6.lower >= rb.lower - 1e-12);
    CHECK(rb6.upper <= rb.upper + 1e-12);
}

TEST_CASE("brute_force_bounds: budget exceeded throws") {
    std::mt19937_64 rng(73);
    MatrixSet set = random_pair(rng, 2);
    CHECK_THROWS_AS(brute_force_bounds(set, 30, 1000), BudgetError);
}

TEST_CASE("candidates are canonical and pairwise distinct") {
    MatrixSet set = fixture("C15");
    SearchReport r = modified_gripenberg(set, 10, 20);
    for (size_t i = 0; i < r.candidates.size(); ++i) {
        CHECK(canonicalize_word(r.candidates[i]) == r.candidates[i]);
        for (size_t j = i + 1; j < r.candidates.size(); ++j)
            CHECK_FALSE(r.candidates[i] == r.candidates[j]);
    }
}
