#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "jsr/apps.hpp"
#include "jsr/gripenberg.hpp"
#include "jsr/preprocess.hpp"

using namespace jsr;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int s) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = g(rng);
    return m;
}

// block upper-triangular pair with 2+2 structure: span{e1,e2} is invariant
MatrixSet reducible_pair(std::mt19937_64& rng) {
    std::vector<Matrix> mats;
    for (int k = 0; k < 2; ++k) {
        Matrix m = random_matrix(rng, 4);
        m.block(2, 0, 2, 2).setZero();
        mats.push_back(m);
    }
    return MatrixSet(mats);
}

}  // namespace

TEST_CASE("reducible pair: blocks found and residual certified") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 8; ++trial) {
        MatrixSet set = reducible_pair(rng);
        ReducibilityReport rep = find_common_invariant_subspace(set);
        REQUIRE_FALSE(rep.irreducible);
        REQUIRE(rep.blocks.has_value());
        CHECK(rep.blocks->size() >= 2);
        REQUIRE(rep.subspace_basis.has_value());
        const Matrix& u = *rep.subspace_basis;
        // orthonormal columns
        CHECK((u.transpose() * u - Matrix::Identity(u.cols(), u.cols()))
                  .lpNorm<Eigen::Infinity>() <= 1e-10);
        // invariance: A*U stays in span(U)
        for (const auto& a : set.matrices) {
            Matrix au = a * u;
            Matrix residual = au - u * (u.transpose() * au);
            CHECK(residual.lpNorm<Eigen::Infinity>() <=
                  1e-8 * std::max(1.0, a.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("reducible pair: block-wise JSR lower bounds match the full set") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 5; ++trial) {
        MatrixSet set = reducible_pair(rng);
        ReducibilityReport rep = find_common_invariant_subspace(set);
        REQUIRE(rep.blocks.has_value());
        double full = brute_force_bounds(set, 4).lower;
        double blockwise = 0.0;
        for (const auto& blk : *rep.blocks)
            blockwise = std::max(blockwise, brute_force_bounds(blk, 4).lower);
        CHECK(blockwise == doctest::Approx(full).epsilon(1e-8));
    }
}

TEST_CASE("irreducible fixtures pass through") {
    ReducibilityReport rep = find_common_invariant_subspace(fixture("E"));
    CHECK(rep.irreducible);
    CHECK_FALSE(rep.blocks.has_value());
}

TEST_CASE("permutation-hidden block structure (zero-pattern heuristic)") {
    // matrices supported on two index groups {0,2} and {1,3}
    Matrix a = Matrix::Zero(4, 4), b = Matrix::Zero(4, 4);
    a(0, 0) = 1.0;
    a(0, 2) = 0.5;
    a(2, 0) = -0.25;
    a(1, 1) = 0.5;
    a(3, 3) = 0.75;
    b(2, 2) = 0.8;
    b(1, 3) = 1.0;
    b(3, 1) = 0.3;
    ReducibilityReport rep = find_common_invariant_subspace(MatrixSet({a, b}));
    CHECK_FALSE(rep.irreducible);
    REQUIRE(rep.blocks.has_value());
    CHECK(rep.blocks->size() == 2);
}

TEST_CASE("difference-subspace heuristic: common row-sum structure") {
    // both matrices have constant row sums -> span{1} complement (differences) invariant
    Matrix a(3, 3), b(3, 3);
    a << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    b << 0.2, 0.4, 0.4, 0.4, 0.2, 0.4, 0.4, 0.4, 0.2;
    ReducibilityReport rep = find_common_invariant_subspace(MatrixSet({a, b}));
    CHECK_FALSE(rep.irreducible);
}

TEST_CASE("classify_case") {
    Matrix a(2, 2);
    a << 1, 1, 0, 1;
    MatrixSet nonneg({a});
    Vector v(2);
    v << 1, 0;
    CHECK(classify_case(nonneg, v) == CaseTag::P);

    Vector vm(2);
    vm << 1, -1;
    CHECK(classify_case(nonneg, vm) == CaseTag::R);

    Matrix m(2, 2);
    m << 1, -1, 0, 1;
    CHECK(classify_case(MatrixSet({m}), v) == CaseTag::R);

    CHECK(classify_case(nonneg, Vector()) == CaseTag::C);
}
