#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "jsr/norms.hpp"
#include "jsr/simplex.hpp"

using namespace jsr;

namespace {

Matrix random_vertices(std::mt19937_64& rng, int s, int m) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix v(s, m);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < m; ++j) v(i, j) = g(rng);
    return v;
}

// dual-vertex enumeration oracle for the symmetrized gauge:
// ||x|| = max <w,x> over {w : |<w,v_i>| <= 1}, maximum at a vertex of the dual
// polytope, i.e. at solutions of s active constraints <w, s_i*v_i> = 1.
double facet_oracle_symmetrized(const Matrix& v, const Vector& x) {
    const int s = static_cast<int>(v.rows());
    const int m = static_cast<int>(v.cols());
    double best = 0.0;
    std::vector<int> pick(static_cast<size_t>(s));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == s) {
            for (int signs = 0; signs < (1 << s); ++signs) {
                Matrix a(s, s);
                Vector b = Vector::Ones(s);
                for (int k = 0; k < s; ++k)
                    a.row(k) = ((signs >> k) & 1 ? -1.0 : 1.0) *
                               v.col(pick[static_cast<size_t>(k)]).transpose();
                Eigen::FullPivLU<Matrix> lu(a);
                if (!lu.isInvertible()) continue;
                Vector w = lu.solve(b);
                bool feasible = true;
                for (int j = 0; j < m; ++j)
                    feasible &= std::abs(w.dot(v.col(j))) <= 1.0 + 1e-9;
                if (feasible) best = std::max(best, w.dot(x));
            }
            return;
        }
        for (int i = start; i < m; ++i) {
            pick[static_cast<size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

// cone gauge oracle: ||x|| = max <y,x> s.t. y >= 0, V'y <= 1 (dual of min sum u,
// Vu >= x); enumerate dual vertices from all choices of s active constraints.
double facet_oracle_cone(const Matrix& v, const Vector& x) {
    const int s = static_cast<int>(v.rows());
    const int m = static_cast<int>(v.cols());
    const int total = s + m;  // constraints: y_i >= 0 (s), v_j' y <= 1 (m)
    double best = 0.0;
    std::vector<int> pick(static_cast<size_t>(s));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == s) {
            Matrix a(s, s);
            Vector b(s);
            for (int k = 0; k < s; ++k) {
                int c = pick[static_cast<size_t>(k)];
                if (c < s) {
                    a.row(k) = Vector::Unit(s, c).transpose();
                    b(k) = 0.0;
                } else {
                    a.row(k) = v.col(c - s).transpose();
                    b(k) = 1.0;
                }
            }
            Eigen::FullPivLU<Matrix> lu(a);
            if (!lu.isInvertible()) return;
            Vector y = lu.solve(b);
            bool feasible = y.minCoeff() >= -1e-9;
            for (int j = 0; j < m && feasible; ++j)
                feasible &= y.dot(v.col(j)) <= 1.0 + 1e-9;
            if (feasible) best = std::max(best, y.dot(x));
            return;
        }
        for (int i = start; i < total; ++i) {
            pick[static_cast<size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

TEST_CASE("simplex: known optimum") {
    // min -x1 - 2*x2 s.t. x1 + x2 + s1 = 4, x1 + 3*x2 + s2 = 6 -> x = (3, 1)
    Matrix a(2, 4);
    a << 1, 1, 1, 0, 1, 3, 0, 1;
    Vector b(2);
    b << 4, 6;
    Vector c(4);
    c << -1, -2, 0, 0;
    LpResult r = solve_standard_lp(a, b, c);
    CHECK(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-5.0).epsilon(1e-10));
    CHECK(r.x(0) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("simplex: infeasible system yields Farkas certificate") {
    // x1 = 1 and x1 = 2 simultaneously, x >= 0
    Matrix a(2, 1);
    a << 1, 1;
    Vector b(2);
    b << 1, 2;
    Vector c = Vector::Zero(1);
    LpResult r = solve_standard_lp(a, b, c);
    CHECK(r.status == LpStatus::Infeasible);
    // Farkas: y'A <= 0, y'b > 0
    CHECK(r.dual.size() == 2);
    CHECK((a.transpose() * r.dual).maxCoeff() <= 1e-8);
    CHECK(r.dual.dot(b) > 1e-10);
}

TEST_CASE("simplex: warm start agrees with cold start") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        Matrix v = random_vertices(rng, 3, 8);
        Vector x = v * Vector::Random(8);
        PolytopeVertices p(HullKind::Symmetrized, v);
        NormResult cold = minkowski_norm(p, x);
        REQUIRE(cold.value < std::numeric_limits<double>::infinity());
        Vector x2 = x + 0.05 * Vector::Random(3);
        NormResult warm = minkowski_norm(p, x2, &cold.basis);
        NormResult cold2 = minkowski_norm(p, x2);
        CHECK(warm.value == doctest::Approx(cold2.value).epsilon(1e-9));
    }
}

TEST_CASE("minkowski_norm: textbook values") {
    Matrix v = Matrix::Identity(2, 2);
    PolytopeVertices ps(HullKind::Symmetrized, v);
    Vector x(2);
    x << 1, 1;
    CHECK(minkowski_norm(ps, x).value == doctest::Approx(2.0).epsilon(1e-10));

    Matrix vc(2, 1);
    vc << 1, 1;
    PolytopeVertices pc(HullKind::Cone, vc);
    Vector y(2);
    y << 0.5, 0.2;
    CHECK(minkowski_norm(pc, y).value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("minkowski_norm: outside span is +inf with EXACT status") {
    Matrix v(3, 1);
    v << 1, 0, 0;
    PolytopeVertices p(HullKind::Symmetrized, v);
    Vector x(3);
    x << 0, 1, 0;
    NormResult r = minkowski_norm(p, x);
    CHECK(r.value == std::numeric_limits<double>::infinity());
    CHECK(r.status == NormStatus::Exact);
}

TEST_CASE("minkowski_norm vs facet-enumeration oracle, symmetrized") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        int s = (trial % 2) ? 3 : 2;
        Matrix v = random_vertices(rng, s, s + 3);
        Vector x = random_vertices(rng, s, 1).col(0);
        PolytopeVertices p(HullKind::Symmetrized, v);
        double lp = minkowski_norm(p, x).value;
        double oracle = facet_oracle_symmetrized(v, x);
        CHECK(lp == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("minkowski_norm vs facet-enumeration oracle, cone") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        int s = (trial % 2) ? 3 : 2;
        Matrix v = random_vertices(rng, s, s + 3).cwiseAbs();
        Vector u = random_vertices(rng, s + 3, 1).col(0).cwiseAbs();
        Vector x = v * u;  // guaranteed inside the cone
        PolytopeVertices p(HullKind::Cone, v);
        double lp = minkowski_norm(p, x).value;
        double oracle = facet_oracle_cone(v, x);
        CHECK(lp == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("sandwich: pseudoinverse <= LP <= coefficient estimate") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        Matrix v = random_vertices(rng, 4, 9);
        Vector t = random_vertices(rng, 9, 1).col(0);
        Vector x = v * t;
        PolytopeVertices p(HullKind::Symmetrized, v);
        double lp = minkowski_norm(p, x).value;
        double lo = estimate_lower_by_pseudoinverse(p, x);
        double hi = estimate_upper_by_coefficients(p, x, t);
        CHECK(lo <= lp + 1e-9);
        CHECK(lp <= hi + 1e-9);
    }
}

TEST_CASE("homogeneity and triangle inequality") {
    std::mt19937_64 rng(31);
    Matrix v = random_vertices(rng, 3, 7);
    PolytopeVertices p(HullKind::Symmetrized, v);
    for (int trial = 0; trial < 20; ++trial) {
        Vector x = v * Vector::Random(7), y = v * Vector::Random(7);
        double nx = minkowski_norm(p, x).value;
        double ny = minkowski_norm(p, y).value;
        double nax = minkowski_norm(p, Vector(-2.5 * x)).value;
        CHECK(nax == doctest::Approx(2.5 * nx).epsilon(1e-10));
        double nxy = minkowski_norm(p, Vector(x + y)).value;
        CHECK(nxy <= nx + ny + 1e-9);
    }
}

TEST_CASE("kind consistency: cone norm <= symmetrized norm for V,x >= 0") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix v = random_vertices(rng, 3, 6).cwiseAbs();
        Vector x = (v * random_vertices(rng, 6, 1).col(0).cwiseAbs()).eval();
        PolytopeVertices ps(HullKind::Symmetrized, v), pc(HullKind::Cone, v);
        CHECK(minkowski_norm(pc, x).value <= minkowski_norm(ps, x).value + 1e-9);
    }
}

TEST_CASE("vertex normalization: every vertex has norm <= 1 in its own polytope") {
    std::mt19937_64 rng(43);
    for (auto kind : {HullKind::Symmetrized, HullKind::Cone}) {
        Matrix v = random_vertices(rng, 3, 6);
        if (kind == HullKind::Cone) v = v.cwiseAbs();
        PolytopeVertices p(kind, v);
        for (int i = 0; i < p.size(); ++i)
            CHECK(minkowski_norm(p, p.v.col(i)).value <= 1.0 + 1e-12);
    }
}

TEST_CASE("estimate_upper_by_coefficients: examples") {
    Matrix v = Matrix::Identity(2, 2);
    PolytopeVertices p(HullKind::Symmetrized, v);
    Vector x(2), t(2);
    x << 1, 1;
    t << 1, 1;
    CHECK(estimate_upper_by_coefficients(p, x, t) == doctest::Approx(2.0));
    Vector e1 = Vector::Unit(2, 0);
    CHECK(estimate_upper_by_coefficients(p, e1, e1) == doctest::Approx(1.0));
    CHECK_THROWS(estimate_upper_by_coefficients(p, x, e1));  // residual too large
}

TEST_CASE("estimate_lower_by_pseudoinverse: examples") {
    Matrix v = Matrix::Identity(2, 2);
    PolytopeVertices p(HullKind::Symmetrized, v);
    Vector x(2);
    x << 1, 1;
    CHECK(estimate_lower_by_pseudoinverse(p, x) == doctest::Approx(std::sqrt(2.0)));
    CHECK(estimate_lower_by_pseudoinverse(p, Vector(Vector::Unit(2, 0))) ==
          doctest::Approx(1.0));
}

TEST_CASE("estimate_outside_by_hyperplane: examples") {
    Matrix v(2, 1);
    v << 1, 0;
    PolytopeVertices p(HullKind::Symmetrized, v);
    Vector x(2), w(2);
    x << 0, 2;
    w << 0, 1;
    CHECK(estimate_outside_by_hyperplane(p, x, w));
    Vector inside(2);
    inside << 0.5, 0;
    CHECK_FALSE(estimate_outside_by_hyperplane(p, inside, w));
    CHECK_FALSE(estimate_outside_by_hyperplane(p, inside, Vector(x)));
}

TEST_CASE("estimate_inside_by_domination: examples") {
    Matrix v(2, 1);
    v << 1, 1;
    PolytopeVertices p(HullKind::Cone, v);
    Vector x(2);
    x << 0.5, 1;
    CHECK(estimate_inside_by_domination(p, x));

    Matrix v2 = Matrix::Identity(2, 2);
    PolytopeVertices p2(HullKind::Cone, v2);
    Vector y(2);
    y << 0.5, 0.5;
    CHECK_FALSE(estimate_inside_by_domination(p2, y));  // norm 1 but no single dominator
    CHECK(minkowski_norm(p2, y).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("monotone_norm_inclusion") {
    std::mt19937_64 rng(47);
    Matrix v = random_vertices(rng, 3, 6);
    PolytopeVertices pv(HullKind::Symmetrized, v);
    PolytopeVertices pw(HullKind::Symmetrized, v.leftCols(3));
    CHECK(monotone_norm_inclusion(pw, pv));
    PolytopeVertices p2(HullKind::Symmetrized, Matrix(2.0 * v));
    CHECK_FALSE(monotone_norm_inclusion(p2, pv));
}

TEST_CASE("PolytopeVertices: append invalidates the pseudoinverse cache") {
    Matrix v = Matrix::Identity(2, 2);
    PolytopeVertices p(HullKind::Symmetrized, v);
    Matrix pinv0 = p.pseudoinverse();
    CHECK(pinv0.rows() == 2);
    Vector x(2);
    x << 1, 1;
    p.append(x);
    CHECK(p.size() == 3);
    CHECK(p.pseudoinverse().rows() == 3);
}
