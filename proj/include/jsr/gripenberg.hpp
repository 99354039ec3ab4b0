#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jsr/common.hpp"
#include "jsr/matrixset.hpp"

namespace jsr {

struct SearchReport {
    std::vector<ProductWord> candidates;  // canonical, pairwise distinct
    double lower_bound = 0.0;             // rho_c
    std::optional<double> upper_bound;    // classic variant only
    bool upper_final = false;             // natural termination (frontier emptied)
    std::int64_t evaluations = 0;         // norm + spectral-radius computations
    std::vector<int> frontier_trace;      // per-depth frontier size after pruning

    // shorter words seen with normalized rho close to rho_c (nearly-s.m.p. pool)
    std::vector<std::pair<ProductWord, double>> nearly_pool;
};

// Alg. 2: breadth-first with norm pruning at rho_c; when the frontier exceeds
// 2N, keep the N smallest-norm and N largest-norm products. Deterministic;
// evaluations <= 2*N*J*D + J.
SearchReport modified_gripenberg(const MatrixSet& set, int n_keep, int depth);

// Variant keeping 2N random survivors (uniform without replacement, seeded).
SearchReport random_modified_gripenberg(const MatrixSet& set, int n_keep, int depth,
                                        std::uint64_t seed);

// Classic branch-and-bound: keep products with ||C||^{1/(k+1)} >= b_- / delta_acc;
// on natural termination b_- >= delta_acc * b_+.
SearchReport classic_gripenberg(const MatrixSet& set, double delta_acc, int depth_cap,
                                std::size_t frontier_cap = 4'000'000);

// Eq. (3) over all words of length <= k.
JsrBounds brute_force_bounds(const MatrixSet& set, int k, std::int64_t budget = 4'000'000);

}  // namespace jsr
