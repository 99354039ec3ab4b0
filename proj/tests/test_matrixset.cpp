#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "jsr/apps.hpp"
#include "jsr/matrixset.hpp"

using namespace jsr;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int s) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = g(rng);
    return m;
}

ProductWord word(std::vector<int> idx) {
    ProductWord w;
    w.indices = std::move(idx);
    return w;
}

}  // namespace

TEST_CASE("evaluate: identity family") {
    MatrixSet set({Matrix::Identity(2, 2)});
    Matrix p = evaluate(set, word({1, 1}));
    CHECK((p - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("evaluate: A^n B closed form") {
    Matrix a(2, 2);
    a << 1, 1, 0, 1;
    MatrixSet set({a, 0.75 * a});
    const int n = 5;
    std::vector<int> idx{2};  // B applied first, then n copies of A
    for (int i = 0; i < n; ++i) idx.push_back(1);
    Matrix p = evaluate(set, word(idx));
    CHECK(p(0, 0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p(0, 1) == doctest::Approx((3.0 * n + 3.0) / 4.0).epsilon(1e-14));
    CHECK(p(1, 0) == doctest::Approx(0.0));
    CHECK(p(1, 1) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(spectral_radius(p) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("evaluate: matches direct multiplication, includes scale") {
    std::mt19937_64 rng(11);
    Matrix a = random_matrix(rng, 3), b = random_matrix(rng, 3);
    MatrixSet set({a, b}, 2.0);
    Matrix p = evaluate(set, word({1, 2}));
    Matrix direct = 4.0 * (b * a);  // scale^2, right-to-left
    CHECK((p - direct).lpNorm<Eigen::Infinity>() <= 1e-14 * direct.lpNorm<Eigen::Infinity>());
}

TEST_CASE("spectral_radius: triangular and complex-pair cases") {
    Matrix t(2, 2);
    t << 1, 1, 0, 1;
    CHECK(spectral_radius(t) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix rot(2, 2);
    rot << 0, -2, 2, 0;
    CHECK(spectral_radius(rot) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral_radius: E2E1 of the balancing pair") {
    MatrixSet e = fixture("E");
    // word (2,1) names E1*E2 applied as "E2 first": the product with rho = 4+sqrt(6)
    Matrix p = evaluate(e, word({2, 1}));
    CHECK(spectral_radius(p) == doctest::Approx(4.0 + std::sqrt(6.0)).epsilon(1e-12));
    CHECK(normalized_spectral_radius(e, word({2, 1})) ==
          doctest::Approx(std::sqrt(4.0 + std::sqrt(6.0))).epsilon(1e-12));
}

TEST_CASE("normalized_spectral_radius: basics and scale exclusion") {
    MatrixSet two({2.0 * Matrix::Identity(2, 2)});
    CHECK(normalized_spectral_radius(two, word({1})) == doctest::Approx(2.0));

    MatrixSet c15 = fixture("C15");
    std::vector<int> idx(15, 1);
    idx.push_back(2);
    CHECK(normalized_spectral_radius(c15, word(idx)) ==
          doctest::Approx(std::exp(1.0 / 15.0)).epsilon(1e-9));

    // scale is excluded: the value is a JSR lower bound for the unscaled family
    MatrixSet scaled = c15.scaled_by(0.5);
    CHECK(normalized_spectral_radius(scaled, word(idx)) ==
          doctest::Approx(std::exp(1.0 / 15.0)).epsilon(1e-9));
}

TEST_CASE("normalized_spectral_radius: cyclic and power invariance") {
    std::mt19937_64 rng(23);
    MatrixSet set({random_matrix(rng, 3), random_matrix(rng, 3)});
    std::vector<int> base{1, 2, 2, 1, 2};
    ProductWord w = word(base);
    const double v = normalized_spectral_radius(set, w);
    for (size_t r = 1; r < base.size(); ++r) {
        std::vector<int> rot(base.begin() + static_cast<long>(r), base.end());
        rot.insert(rot.end(), base.begin(), base.begin() + static_cast<long>(r));
        CHECK(normalized_spectral_radius(set, word(rot)) ==
              doctest::Approx(v).epsilon(1e-10));
    }
    for (int k = 2; k <= 4; ++k) {
        std::vector<int> pow;
        for (int i = 0; i < k; ++i) pow.insert(pow.end(), base.begin(), base.end());
        CHECK(normalized_spectral_radius(set, word(pow)) ==
              doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("lower-bound soundness: rho(w)^{1/n} <= min_k max_u ||P_u||^{1/k}") {
    std::mt19937_64 rng(37);
    MatrixSet set({random_matrix(rng, 3), random_matrix(rng, 3)});
    double upper = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> level{{}};
    for (int k = 1; k <= 6; ++k) {
        std::vector<std::vector<int>> next;
        double max_norm = 0.0;
        for (const auto& w : level)
            for (int j = 1; j <= 2; ++j) {
                auto e = w;
                e.push_back(j);
                max_norm = std::max(max_norm, operator_norm(evaluate(set, word(e))));
                next.push_back(std::move(e));
            }
        upper = std::min(upper, std::pow(max_norm, 1.0 / k));
        for (const auto& w : next)
            CHECK(normalized_spectral_radius(set, word(w)) <= upper + 1e-9);
        level = std::move(next);
    }
}

TEST_CASE("leading_eigenpair: examples and residual") {
    Matrix d(2, 2);
    d << 2, 0, 0, 1;
    EigenPair p = leading_eigenpair(d);
    CHECK(p.value == doctest::Approx(2.0));
    CHECK(std::abs(p.vector(0)) == doctest::Approx(1.0));
    CHECK(p.is_real);
    CHECK(p.is_simple);

    MatrixSet e = fixture("E");
    EigenPair p1 = leading_eigenpair(evaluate(e, word({2, 1})));
    CHECK(std::abs(p1.vector(0)) == doctest::Approx(0.9121).epsilon(1e-3));
    CHECK(std::abs(p1.vector(1)) == doctest::Approx(0.4100).epsilon(1e-3));

    Matrix rot(2, 2);
    rot << 0, -2, 2, 0;
    CHECK_FALSE(leading_eigenpair(rot).is_real);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = random_matrix(rng, 4);
        EigenPair q = leading_eigenpair(m);
        CHECK(q.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
        if (q.is_real)
            CHECK((m * q.vector - q.value * q.vector).lpNorm<Eigen::Infinity>() <=
                  1e-9 * operator_norm(m));
    }
}

TEST_CASE("dual_leading_eigenvector: symmetric, paper value, random pairing") {
    Matrix sym(2, 2);
    sym << 3, 1, 1, 2;
    EigenPair p = leading_eigenpair(sym);
    Vector dual = dual_leading_eigenvector(sym, p.vector);
    CHECK((dual - p.vector).lpNorm<Eigen::Infinity>() <= 1e-9);  // unit right = its own dual

    MatrixSet e = fixture("E");
    EigenPair p2 = leading_eigenpair(e.at(2));
    Vector d2 = dual_leading_eigenvector(e.at(2), p2.vector);
    CHECK(std::abs(d2(0)) == doctest::Approx(2.2361).epsilon(1e-3));
    CHECK(std::abs(d2(1)) <= 1e-9);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix m = random_matrix(rng, 4);
        EigenPair q = leading_eigenpair(m);
        if (!q.is_real || !q.is_simple) continue;
        Vector d = dual_leading_eigenvector(m, q.vector);
        CHECK(q.vector.dot(d) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((m.transpose() * d - q.value * d).lpNorm<Eigen::Infinity>() <=
              1e-8 * operator_norm(m));
    }
}

TEST_CASE("canonicalize_word: powers, rotations, enumeration oracle") {
    CHECK(canonicalize_word(word({2, 1, 2, 1})) == word({1, 2}));
    CHECK(canonicalize_word(word({3, 1, 2})) == word({1, 2, 3}));

    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> pick(1, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> w(6);
        for (auto& x : w) x = pick(rng);
        ProductWord canon = canonicalize_word(word(w));
        // every rotation canonicalizes identically
        for (size_t r = 0; r < w.size(); ++r) {
            std::vector<int> rot(w.begin() + static_cast<long>(r), w.end());
            rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
            CHECK(canonicalize_word(word(rot)) == canon);
        }
        // aperiodic words: canonical form is the least rotation (enumeration oracle)
        bool aperiodic = true;
        for (size_t p = 1; p < w.size(); ++p) {
            if (w.size() % p != 0) continue;
            bool periodic = true;
            for (size_t i = 0; i < w.size(); ++i) periodic &= (w[i] == w[i % p]);
            aperiodic &= !periodic;
        }
        if (aperiodic) {
            std::vector<int> least = w;
            for (size_t r = 1; r < w.size(); ++r) {
                std::vector<int> rot(w.begin() + static_cast<long>(r), w.end());
                rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
                least = std::min(least, rot);
            }
            CHECK(canon.indices == least);
        }
    }
}

TEST_CASE("MatrixSet accessors") {
    MatrixSet e = fixture("E");
    CHECK(e.dim() == 2);
    CHECK(e.count() == 2);
    CHECK(e.scale == doctest::Approx(1.0));
    CHECK(e.at(1)(0, 0) == doctest::Approx(2.0));
    MatrixSet s = e.scaled_by(0.5);
    CHECK(s.scale == doctest::Approx(0.5));
    CHECK((s.at(1) - e.at(1)).norm() == doctest::Approx(0.0));  // scale is metadata
}
