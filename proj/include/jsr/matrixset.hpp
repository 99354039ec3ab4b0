#pragma once

#include <optional>
#include <vector>

#include "jsr/common.hpp"

namespace jsr {

// Index sequence (j_1..j_n), 1-based, naming the product A_{j_n}···A_{j_1}.
struct ProductWord {
    std::vector<int> indices;

    mutable std::optional<double> cached_norm;
    mutable std::optional<double> cached_spectral_radius;

    int length() const { return static_cast<int>(indices.size()); }
    bool operator==(const ProductWord& o) const { return indices == o.indices; }
    std::string str() const;  // "2 1 1"
};

// Ordered finite family {A_1..A_J} of s×s real matrices plus a scaling factor
// applied uniformly when products are evaluated in scaled form.
struct MatrixSet {
    std::vector<Matrix> matrices;
    double scale = 1.0;

    MatrixSet() = default;
    explicit MatrixSet(std::vector<Matrix> mats, double sc = 1.0);

    int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
    int count() const { return static_cast<int>(matrices.size()); }
    const Matrix& at(int j) const;  // 1-based
    MatrixSet scaled_by(double factor) const;
};

struct EigenPair {
    double value = 0.0;  // leading eigenvalue (real part if complex)
    Vector vector;       // associated real eigenvector, unit 2-norm
    bool is_real = false;
    bool is_simple = false;
};

// Product A_{j_n}···A_{j_1} of the *unscaled* family members times scale^n.
Matrix evaluate(const MatrixSet& set, const ProductWord& word);

// Spectral radius of a single matrix (real Schur form).
double spectral_radius(const Matrix& m);

// Largest singular value.
double operator_norm(const Matrix& m);

// rho(product)^{1/n} of the unscaled family.
double normalized_spectral_radius(const MatrixSet& set, const ProductWord& word);

// Leading eigenvalue with a real eigenvector; is_real/is_simple flags report
// whether the leading eigenvalue is real and simple (modulus gap + multiplicity).
EigenPair leading_eigenpair(const Matrix& m);

// Left eigenvector v* of the leading eigenvalue, normalized so <v, v*> = 1.
// Requires a real simple leading eigenvalue.
Vector dual_leading_eigenvector(const Matrix& m, const Vector& right);

// Primitive root of the word (no proper power), then lexicographically least
// cyclic rotation.
ProductWord canonicalize_word(const ProductWord& word);

}  // namespace jsr
