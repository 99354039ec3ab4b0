#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "jsr/common.hpp"
#include "jsr/matrixset.hpp"

namespace jsr {

enum class HullKind { Symmetrized, Cone };  // co_s (case R) / co_- (case P)

struct VertexInfo {
    ProductWord word;        // full word mapping the root to this vertex
    int root = 0;            // root index the vertex descends from
    int iteration = 0;       // iteration at which it was added
    double balancing = 1.0;  // balancing factor applied to its root
};

// Vertex list V defining co_s V or co_- V. Columns of `v` are the vertices.
class PolytopeVertices {
  public:
    HullKind kind = HullKind::Symmetrized;
    Matrix v;  // s x m
    std::vector<VertexInfo> info;

    PolytopeVertices() = default;
    PolytopeVertices(HullKind k, Matrix vertices);

    int dim() const { return static_cast<int>(v.rows()); }
    int size() const { return static_cast<int>(v.cols()); }
    void append(const Vector& x, VertexInfo meta = {});

    // Moore-Penrose pseudoinverse of V, cached until the vertex list changes.
    const Matrix& pseudoinverse() const;

  private:
    mutable std::shared_ptr<Matrix> pinv_cache_;
};

enum class NormStatus { Exact, UpperOnly, InsideByEstimate, OutsideByEstimate };

struct NormResult {
    double value = std::numeric_limits<double>::infinity();
    NormStatus status = NormStatus::Exact;
    // Exact finite: coefficient vector t (signed, case R) or u >= 0 (case P).
    // Exact infinite (point outside cone span): Farkas functional.
    std::optional<Vector> certificate;
    std::vector<int> basis;  // warm-start handle for sibling solves
    int lp_pivots = 0;
    bool degenerate = false;  // LP hit its pivot cap; value is an upper bound only
};

// Minkowski norm of x w.r.t. co_s V (min ||t||_1, Vt = x) or co_- V
// (min sum u, Vu >= x, u >= 0). +inf when x is not in the span/cone.
NormResult minkowski_norm(const PolytopeVertices& v, const Vector& x,
                          const std::vector<int>* warm = nullptr);

// Lemma estimates. Each is sound for its hull kind and never beats the LP.
// (2) any representation t of x gives an upper bound ||t||_1.
double estimate_upper_by_coefficients(const PolytopeVertices& v, const Vector& x, const Vector& t);
// (3) ||V^+ x||_2 is a lower bound.
double estimate_lower_by_pseudoinverse(const PolytopeVertices& v, const Vector& x);
// (4) a functional w with |<w, v_i>| <= 1 (case R) / <w, v_i> <= 1 (case P) proves
// ||x|| >= <w, x>; returns true when this certifies ||x|| > 1.
bool estimate_outside_by_hyperplane(const PolytopeVertices& v, const Vector& x, const Vector& w);
// (5) case P only: x <= v_i componentwise for some vertex proves ||x|| <= 1.
bool estimate_inside_by_domination(const PolytopeVertices& v, const Vector& x);

// Monotonicity: W subset of V (columns) implies ||.||_{co W} >= ||.||_{co V};
// verifies the inclusion and returns it.
bool monotone_norm_inclusion(const PolytopeVertices& w, const PolytopeVertices& v);

}  // namespace jsr
