#pragma once

#include <vector>

#include "jsr/common.hpp"

namespace jsr {

enum class LpStatus { Optimal, Infeasible, PivotLimit };

struct LpResult {
    LpStatus status = LpStatus::PivotLimit;
    double objective = std::numeric_limits<double>::infinity();
    Vector x;                 // primal solution (Optimal only)
    Vector dual;              // simplex multipliers y; Farkas certificate when Infeasible
    std::vector<int> basis;   // final basis (column indices), reusable as warm start
    int pivots = 0;
};

// min c'x  s.t.  Ax = b, x >= 0, by the revised simplex method.
// `warm` optionally supplies a starting basis (e.g. from a sibling solve).
LpResult solve_standard_lp(const Matrix& a, const Vector& b, const Vector& c,
                           const std::vector<int>* warm = nullptr);

}  // namespace jsr
