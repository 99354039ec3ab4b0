#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "jsr/common.hpp"
#include "jsr/gripenberg.hpp"
#include "jsr/matrixset.hpp"
#include "jsr/norms.hpp"
#include "jsr/preprocess.hpp"

namespace jsr {

enum class Role { SMP, NEARLY, EXTRA };

struct Candidate {
    ProductWord word;
    double rho_norm = 0.0;       // rho(Pi)^{1/l}, scaled family
    EigenPair lead;              // leading eigenpair of Pi
    Vector dual;                 // left eigenvector, <v, v*> = 1
    std::vector<Vector> roots;   // cyclic root vectors v^{(0..l-1)} (NEARLY: just v)
    Role role = Role::SMP;
};

struct CandidateSet {
    std::vector<Candidate> smps;
    std::vector<Candidate> nearly;
    double rho_c = 0.0;
    CaseTag case_tag = CaseTag::R;
};

struct BalancingProblem {
    Matrix q;                       // R' x R', columns zero for EXTRA targets
    std::vector<Role> roles;
    std::vector<double> rho_rel;    // rho_i / rho_c (1 for SMP/EXTRA)
    int horizon = 10;               // effective horizon after the budget clamp
};

struct PolytopeOptions {
    double delta = 1.0;
    double eps = 1e-10;
    double tau = 0.9999;
    double extra_t = 0.1;
    int balancing_horizon = 10;
    int select_a = 3, select_b = 1;      // natural-selection schedule a:b
    int age_threshold = 6;               // fairness drain
    int max_iterations = 1000;
    std::size_t max_vertices = 100000;
    std::size_t max_batch = 8192;
    std::size_t growth_budget = 20000;   // vertices added without b-progress => advise restart
    int threads = 0;                     // 0 = hardware concurrency
};

enum class TerminationReason { InvariantPolytope, IterationCap, VertexCap, RestartRequested };

struct IterationTrace {
    int iteration = 0;
    std::size_t v_size = 0, batch = 0, added = 0;
    double b = 0.0, lower = 0.0, upper = 0.0;
    double wall_seconds = 0.0;
};

struct RunResult {
    JsrBounds bounds;
    PolytopeVertices vertices;
    std::vector<IterationTrace> trace;
    TerminationReason reason = TerminationReason::IterationCap;
    std::optional<ProductWord> better_candidate;  // restart criterion fired
    bool growth_budget_hit = false;               // secondary fail-safe criterion
    bool balancing_infeasible = false;            // fell back to alpha = 1
    std::vector<double> balancing;                // alpha actually used
    int iterations = 0;
};

// Candidate intake: all canonical maximizers from the search become SMPs with
// cyclic roots; shorter words with rho >= tau*rho_c become NEARLY roots.
// Throws UnsupportedCaseError for complex/defective leading eigenpairs.
CandidateSet build_candidates(const MatrixSet& set, const SearchReport& search, double tau);

// Left singular vectors of the root matrix with sigma < T * sigma_max
// (componentwise |.| for cone hulls).
std::vector<Vector> compute_extra_vertices(const Matrix& roots, double t, HullKind kind);

// q_{i,j} = sup over the depth-<=h product tree applied to root set i of |<v_j*, z>|.
BalancingProblem build_balancing_problem(const MatrixSet& set, const CandidateSet& cands,
                                         const std::vector<Vector>& extras, double delta,
                                         int horizon, std::int64_t budget = 2'000'000);

// alpha solving the log-space difference-constraint system; nullopt = INFEASIBLE.
std::optional<std::vector<double>> compute_balancing(const BalancingProblem& problem);

// Natural-selection queue entry: an unevaluated child.
struct PendingChild {
    Vector x;
    int parent = -1;  // vertex index in V, -1 for a root's child bookkeeping
    int letter = 0;   // 1-based matrix index applied
    int born = 0;     // iteration enqueued
};

// Exposed for the fairness/schedule unit tests: picks the batch E_{k+1}.
std::vector<std::size_t> natural_selection(const std::deque<PendingChild>& queue,
                                           const PolytopeVertices& v,
                                           const std::vector<double>& parent_norms,
                                           int iteration, const PolytopeOptions& opt);

// Restart criterion: any word with normalized rho > rho_c*(1+1e-12).
std::optional<ProductWord> restart_check(const MatrixSet& set,
                                         const std::vector<ProductWord>& words, double rho_c);

// The modified invariant polytope algorithm (single run, no restart driving).
RunResult run(const MatrixSet& set, const CandidateSet& cands, const PolytopeOptions& opt,
              const std::vector<double>* balancing_override = nullptr);

// Full driver: Gripenberg search, candidate intake, up to 5 restarts, then the
// delta = 1-1e-9 fallback.
struct EngineOptions {
    PolytopeOptions polytope;
    int grip_n = 20, grip_d = 100;
    int max_restarts = 5;
    bool skip_reducibility_check = false;
};

struct EngineResult {
    JsrBounds bounds;
    std::vector<ProductWord> smp_words;
    RunResult last_run;
    int restarts = 0;
    bool used_delta_fallback = false;
    ReducibilityReport reducibility;
};

EngineResult compute_jsr(const MatrixSet& set, const EngineOptions& opt = {});

}  // namespace jsr
