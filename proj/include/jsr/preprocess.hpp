#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jsr/common.hpp"
#include "jsr/matrixset.hpp"

namespace jsr {

enum class CaseTag { P, R, C };

struct ReducibilityReport {
    bool irreducible = true;  // no heuristic fired; NOT a proof of irreducibility
    std::optional<Matrix> subspace_basis;           // s x d, orthonormal columns
    std::optional<std::vector<MatrixSet>> blocks;   // diagonal blocks, JSR = max over them
    CaseTag case_tag = CaseTag::R;
    std::vector<std::string> notes;
};

// Heuristics, in order: (a) zero-pattern permutation block structure,
// (b) eigenvector-closure sweep, (c) difference subspace / all-ones complement.
// Sound but incomplete.
ReducibilityReport find_common_invariant_subspace(const MatrixSet& set);

// (P) nonnegative entries + nonnegative leading eigenvector; (R) real leading
// eigenvector; (C) otherwise.
CaseTag classify_case(const MatrixSet& set, const Vector& leading_vector);

}  // namespace jsr
