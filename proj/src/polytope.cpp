#include "jsr/polytope.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace jsr {
namespace {

std::vector<Matrix> scaled_family(const MatrixSet& set, double factor) {
    std::vector<Matrix> out;
    out.reserve(set.matrices.size());
    for (const auto& m : set.matrices) out.push_back(factor * set.scale * m);
    return out;
}

double scaled_normalized_rho(const MatrixSet& set, const ProductWord& w) {
    return set.scale * normalized_spectral_radius(set, w);
}

bool near_duplicate(const Vector& x, const Vector& v, HullKind kind, double tol) {
    const double scale = std::max(1.0, v.lpNorm<Eigen::Infinity>());
    if ((x - v).lpNorm<Eigen::Infinity>() <= tol * scale) return true;
    if (kind == HullKind::Symmetrized && (x + v).lpNorm<Eigen::Infinity>() <= tol * scale)
        return true;
    return false;
}

Candidate make_candidate(const MatrixSet& set, const ProductWord& word, double rho_c, Role role) {
    Candidate c;
    c.word = word;
    c.role = role;
    Matrix pi = evaluate(set, word);
    c.lead = leading_eigenpair(pi);
    if (!c.lead.is_real)
        throw UnsupportedCaseError("candidate " + word.str() +
                                   " has a complex leading eigenvalue (case C)");
    c.rho_norm = std::pow(std::abs(spectral_radius(pi)), 1.0 / word.length());
    if (c.lead.is_simple) {
        c.dual = dual_leading_eigenvector(pi, c.lead.vector);
    }  // non-simple leading pair: no dual functional; excluded from q targets
    c.roots.push_back(c.lead.vector);
    if (role == Role::SMP) {
        // cyclic roots v^{(i)} = rho_r^{-i} A_{j_i}...A_{j_1} v, i = 1..l-1
        Vector v = c.lead.vector;
        for (int i = 0; i + 1 < word.length(); ++i) {
            v = (set.scale / c.rho_norm) * (set.at(word.indices[static_cast<size_t>(i)]) * v);
            c.roots.push_back(v);
        }
    }
    (void)rho_c;
    return c;
}

struct TreeMax {
    // walks the depth-<=h product tree over `mats` from `seeds`, recording
    // max |<dual_j, z>| for every dual functional
    static void accumulate(const std::vector<Matrix>& mats, const std::vector<Vector>& seeds,
                           int h, const std::vector<Vector>& duals, std::vector<double>& best) {
        std::vector<Vector> cur = seeds;
        for (int depth = 0;; ++depth) {
            for (const auto& z : cur)
                for (size_t j = 0; j < duals.size(); ++j)
                    if (duals[j].size() > 0)
                        best[j] = std::max(best[j], std::abs(duals[j].dot(z)));
            if (depth == h) break;
            std::vector<Vector> next;
            next.reserve(cur.size() * mats.size());
            for (const auto& z : cur)
                for (const auto& m : mats) next.push_back(m * z);
            cur = std::move(next);
        }
    }
};

}  // namespace

CandidateSet build_candidates(const MatrixSet& set, const SearchReport& search, double tau) {
    if (search.candidates.empty()) throw ParseError("candidate search produced no candidates");
    CandidateSet cs;
    cs.rho_c = search.lower_bound;

    // shortest candidates first; degenerate sets can tie at rho_c with arbitrarily
    // many long words, so keep a small co-equal slate (any subset stays sound)
    std::vector<ProductWord> words = search.candidates;
    std::sort(words.begin(), words.end(), [](const ProductWord& a, const ProductWord& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.indices < b.indices;
    });
    if (words.size() > 8) words.resize(8);

    int min_len = std::numeric_limits<int>::max();
    for (const auto& w : words) {
        cs.smps.push_back(make_candidate(set, w, cs.rho_c, Role::SMP));
        min_len = std::min(min_len, w.length());
    }
    // tight consistency between the search bound and recomputed candidate radii
    double best = 0.0;
    for (const auto& c : cs.smps) best = std::max(best, c.rho_norm);
    cs.rho_c = std::max(cs.rho_c, best);

    std::vector<std::pair<ProductWord, double>> pool = search.nearly_pool;
    std::sort(pool.begin(), pool.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [word, rho] : pool) {
        if (cs.nearly.size() >= 8) break;
        if (rho < tau * cs.rho_c) continue;
        ProductWord canon = canonicalize_word(word);
        if (canon.length() >= min_len) continue;
        bool dup = false;
        for (const auto& c : cs.smps) dup |= (c.word == canon);
        for (const auto& c : cs.nearly) dup |= (c.word == canon);
        if (dup) continue;
        try {
            cs.nearly.push_back(make_candidate(set, canon, cs.rho_c, Role::NEARLY));
        } catch (const UnsupportedCaseError&) {
            // complex leading pair on a nearly-s.m.p.: simply not usable as a root
        }
    }

    const Vector& lead0 = cs.smps.front().lead.vector;
    MatrixSet eff = set;
    cs.case_tag = classify_case(eff, lead0);
    if (cs.case_tag == CaseTag::P) {
        // Perron roots: clip the tiny negative noise so cone vertices are valid
        for (auto* group : {&cs.smps, &cs.nearly})
            for (auto& c : *group)
                for (auto& r : c.roots) r = r.cwiseMax(0.0);
    }
    return cs;
}

std::vector<Vector> compute_extra_vertices(const Matrix& roots, double t, HullKind kind) {
    if (roots.cols() == 0) throw ParseError("extra vertices need a nonempty root matrix");
    Eigen::JacobiSVD<Matrix> svd(roots, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    std::vector<Vector> out;
    for (Eigen::Index i = 0; i < roots.rows(); ++i) {
        const double sigma = i < sv.size() ? sv(i) : 0.0;
        if (sigma < t * smax) {
            Vector u = svd.matrixU().col(i);
            if (kind == HullKind::Cone) u = u.cwiseAbs();
            out.push_back(u);
        }
    }
    return out;
}

BalancingProblem build_balancing_problem(const MatrixSet& set, const CandidateSet& cands,
                                         const std::vector<Vector>& extras, double delta,
                                         int horizon, std::int64_t budget) {
    BalancingProblem prob;
    const int j_count = set.count();
    std::vector<const Candidate*> eig_roots;
    for (const auto& c : cands.smps) eig_roots.push_back(&c);
    for (const auto& c : cands.nearly) eig_roots.push_back(&c);
    const int n = static_cast<int>(eig_roots.size() + extras.size());

    prob.horizon = horizon;
    std::int64_t root_total = static_cast<std::int64_t>(extras.size());
    for (const auto* c : eig_roots) root_total += static_cast<std::int64_t>(c->roots.size());
    auto tree_nodes = [&](int h) {
        std::int64_t nodes = 1, level = 1;
        for (int d = 0; d < h; ++d) {
            level *= j_count;
            nodes += level;
            if (nodes > budget) return nodes;
        }
        return nodes;
    };
    while (prob.horizon > 0 && root_total * tree_nodes(prob.horizon) > budget) --prob.horizon;

    const auto mats = scaled_family(set, delta / cands.rho_c);
    std::vector<Vector> duals(static_cast<size_t>(n));
    for (size_t i = 0; i < eig_roots.size(); ++i) duals[i] = eig_roots[i]->dual;
    // extras carry no eigen-functional: their q columns stay zero

    prob.q = Matrix::Zero(n, n);
    prob.roles.resize(static_cast<size_t>(n));
    prob.rho_rel.assign(static_cast<size_t>(n), 1.0);
    for (int i = 0; i < n; ++i) {
        std::vector<Vector> seeds;
        if (i < static_cast<int>(eig_roots.size())) {
            seeds = eig_roots[static_cast<size_t>(i)]->roots;
            prob.roles[static_cast<size_t>(i)] = eig_roots[static_cast<size_t>(i)]->role;
            if (prob.roles[static_cast<size_t>(i)] == Role::NEARLY)
                prob.rho_rel[static_cast<size_t>(i)] =
                    eig_roots[static_cast<size_t>(i)]->rho_norm / cands.rho_c;
        } else {
            seeds = {extras[static_cast<size_t>(i) - eig_roots.size()]};
            prob.roles[static_cast<size_t>(i)] = Role::EXTRA;
        }
        std::vector<double> best(static_cast<size_t>(n), 0.0);
        TreeMax::accumulate(mats, seeds, prob.horizon, duals, best);
        for (int j = 0; j < n; ++j) prob.q(i, j) = best[static_cast<size_t>(j)];
    }
    return prob;
}

std::optional<std::vector<double>> compute_balancing(const BalancingProblem& problem) {
    const int n = static_cast<int>(problem.roles.size());
    constexpr double kMargin = 1e-6;
    std::vector<int> smp;
    for (int i = 0; i < n; ++i)
        if (problem.roles[static_cast<size_t>(i)] == Role::SMP) smp.push_back(i);

    // longest-path relaxation of x_j >= x_i + log q_ij + margin over SMP indices
    std::vector<double> x(smp.size(), 0.0);
    for (size_t pass = 0; pass <= smp.size(); ++pass) {
        bool changed = false;
        for (size_t a = 0; a < smp.size(); ++a)
            for (size_t b = 0; b < smp.size(); ++b) {
                if (a == b) continue;
                const double q = problem.q(smp[a], smp[b]);
                if (q <= 0.0) continue;
                const double cand = x[a] + std::log(q) + kMargin;
                if (cand > x[b] + 1e-15) {
                    x[b] = cand;
                    changed = true;
                }
            }
        if (!changed) break;
        if (pass == smp.size()) return std::nullopt;  // positive cycle: INFEASIBLE
    }

    std::vector<double> alpha(static_cast<size_t>(n), 1.0);
    const double base = x.empty() ? 0.0 : x[0];
    for (size_t a = 0; a < smp.size(); ++a)
        alpha[static_cast<size_t>(smp[a])] = std::exp(x[a] - base);
    for (int i = 0; i < n; ++i) {
        const Role role = problem.roles[static_cast<size_t>(i)];
        if (role == Role::SMP) continue;
        const double maxq = problem.q.row(i).maxCoeff();
        const double target =
            role == Role::NEARLY ? 0.999 * problem.rho_rel[static_cast<size_t>(i)] : 0.01;
        alpha[static_cast<size_t>(i)] = maxq > 1e-300 ? target / maxq : target;
    }
    return alpha;
}

std::vector<std::size_t> natural_selection(const std::deque<PendingChild>& queue,
                                           const PolytopeVertices& v,
                                           const std::vector<double>& parent_norms,
                                           int iteration, const PolytopeOptions& opt) {
    const std::size_t total = queue.size();
    std::vector<std::size_t> picked;
    if (total == 0) return picked;

    int j_count = 1;
    for (const auto& p : queue) j_count = std::max(j_count, p.letter);
    // small queues are evaluated wholesale (selection only pays off at scale)
    const std::size_t floor_batch = std::min(
        total, std::max<std::size_t>({static_cast<std::size_t>(2 * j_count),
                                      (total + 9) / 10, std::size_t{128}}));
    const std::size_t batch = std::min(opt.max_batch, floor_batch);
    if (batch >= total) {
        picked.resize(total);
        std::iota(picked.begin(), picked.end(), std::size_t{0});
        return picked;
    }

    std::vector<char> taken(total, 0);
    // fairness drain: everything past the age threshold goes in
    for (std::size_t i = 0; i < total; ++i)
        if (iteration - queue[i].born >= opt.age_threshold) taken[i] = 1;

    const int cycle = opt.select_a + opt.select_b;
    const bool strategy_a = (iteration % std::max(1, cycle)) < opt.select_a;
    std::vector<std::pair<double, std::size_t>> scored(total);
    if (strategy_a) {
        const Matrix& pinv = v.pseudoinverse();
        for (std::size_t i = 0; i < total; ++i)
            scored[i] = {(pinv * queue[i].x).norm(), i};
    } else {
        for (std::size_t i = 0; i < total; ++i) {
            const int p = queue[i].parent;
            const double pn = (p >= 0 && p < static_cast<int>(parent_norms.size()))
                                  ? parent_norms[static_cast<size_t>(p)]
                                  : std::numeric_limits<double>::infinity();
            scored[i] = {pn, i};
        }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    std::size_t count = 0;
    for (std::size_t i = 0; i < total; ++i) count += taken[i];
    for (const auto& [score, idx] : scored) {
        if (count >= batch) break;
        if (!taken[idx]) {
            taken[idx] = 1;
            ++count;
        }
    }
    for (std::size_t i = 0; i < total; ++i)
        if (taken[i]) picked.push_back(i);
    return picked;
}

std::optional<ProductWord> restart_check(const MatrixSet& set,
                                         const std::vector<ProductWord>& words, double rho_c) {
    std::optional<ProductWord> best;
    double best_rho = rho_c * (1.0 + 1e-12);
    for (const auto& w : words) {
        if (w.length() == 0) continue;
        const double rho = scaled_normalized_rho(set, w);
        if (rho > best_rho) {
            best_rho = rho;
            best = canonicalize_word(w);
        }
    }
    return best;
}

RunResult run(const MatrixSet& set, const CandidateSet& cands, const PolytopeOptions& opt,
              const std::vector<double>* balancing_override) {
    if (cands.case_tag == CaseTag::C)
        throw UnsupportedCaseError("case (C) input: complex leading eigenvector");
    if (cands.smps.empty()) throw ParseError("run() requires at least one candidate");
    const double rho_c = cands.rho_c;
    if (!(rho_c > 0.0)) throw NumericalError("run() requires rho_c > 0");
    const double delta = opt.delta;
    const HullKind kind = cands.case_tag == CaseTag::P ? HullKind::Cone : HullKind::Symmetrized;
    const auto mats = scaled_family(set, delta / rho_c);  // the scaled family ~A
    const int j_count = set.count();
    const int s = set.dim();
    const auto t_start = std::chrono::steady_clock::now();

    RunResult res;
    res.bounds.lower = rho_c;
    res.bounds.upper = std::numeric_limits<double>::infinity();
    res.bounds.lower_evidence = "normalized spectral radius of candidate(s)";

    // ---- roots, extras, balancing --------------------------------------
    struct Root {
        Vector x;
        ProductWord history;  // word prefix mapping the eigenvector to this root
        int group;            // index into the balancing problem
    };
    std::vector<Root> roots;
    std::vector<const Candidate*> eig_cands;
    for (const auto& c : cands.smps) eig_cands.push_back(&c);
    for (const auto& c : cands.nearly) eig_cands.push_back(&c);
    for (size_t g = 0; g < eig_cands.size(); ++g) {
        const auto* c = eig_cands[g];
        for (size_t i = 0; i < c->roots.size(); ++i) {
            Root r;
            r.x = c->roots[i];
            r.history.indices.assign(c->word.indices.begin(),
                                     c->word.indices.begin() + static_cast<long>(i));
            r.group = static_cast<int>(g);
            roots.push_back(std::move(r));
        }
    }
    Matrix root_mat(s, static_cast<Eigen::Index>(roots.size()));
    for (size_t i = 0; i < roots.size(); ++i) root_mat.col(static_cast<Eigen::Index>(i)) = roots[i].x;
    std::vector<Vector> extras = compute_extra_vertices(root_mat, opt.extra_t, kind);

    std::vector<double> alpha;
    if (balancing_override) {
        alpha = *balancing_override;
        alpha.resize(eig_cands.size() + extras.size(), 0.01);
    } else if (delta < 1.0) {
        // delta < 1 needs no balancing (termination is guaranteed); extras small
        alpha.assign(eig_cands.size(), 1.0);
        alpha.resize(eig_cands.size() + extras.size(), 0.01);
    } else {
        BalancingProblem bp = build_balancing_problem(set, cands, extras, delta,
                                                      opt.balancing_horizon);
        auto solved = compute_balancing(bp);
        if (solved) {
            alpha = *solved;
        } else {
            res.balancing_infeasible = true;
            alpha.assign(eig_cands.size() + extras.size(), 1.0);
            for (size_t i = eig_cands.size(); i < alpha.size(); ++i) alpha[i] = 0.01;
        }
    }
    res.balancing = alpha;

    // ---- state -----------------------------------------------------------
    PolytopeVertices v(kind, Matrix(s, 0));
    std::vector<double> vertex_norm;     // N(v); +inf for roots
    std::vector<int> children_pending;   // unevaluated children per vertex
    std::deque<PendingChild> queue;
    double dedup_tol = 1e-12;

    auto push_vertex = [&](const Vector& x, VertexInfo meta, double n_value, int iteration) {
        meta.iteration = iteration;
        v.append(x, std::move(meta));
        vertex_norm.push_back(n_value);
        children_pending.push_back(j_count);
        const int idx = v.size() - 1;
        for (int j = 1; j <= j_count; ++j) {
            PendingChild pc;
            pc.x = mats[static_cast<size_t>(j - 1)] * x;
            pc.parent = idx;
            pc.letter = j;
            pc.born = iteration;
            queue.push_back(std::move(pc));
        }
    };

    for (size_t i = 0; i < roots.size(); ++i) {
        const double a = alpha[static_cast<size_t>(roots[i].group)];
        Vector x = a * roots[i].x;
        bool dup = false;
        for (int c = 0; c < v.size() && !dup; ++c) dup = near_duplicate(x, v.v.col(c), kind, dedup_tol);
        if (dup) continue;
        VertexInfo meta;
        meta.word = roots[i].history;
        meta.root = roots[i].group;
        meta.balancing = a;
        push_vertex(x, std::move(meta), std::numeric_limits<double>::infinity(), 0);
    }
    for (size_t e = 0; e < extras.size(); ++e) {
        const double a = alpha[eig_cands.size() + e];
        Vector x = a * extras[e];
        VertexInfo meta;
        meta.root = static_cast<int>(eig_cands.size() + e);
        meta.balancing = a;
        push_vertex(x, std::move(meta), std::numeric_limits<double>::infinity(), 0);
    }

    double b = std::numeric_limits<double>::infinity();
    std::size_t added_since_b_progress = 0;
    res.reason = TerminationReason::IterationCap;

    auto recompute_b = [&]() {
        double worst = 1.0;
        for (int i = 0; i < v.size(); ++i)
            if (children_pending[static_cast<size_t>(i)] > 0)
                worst = std::max(worst, vertex_norm[static_cast<size_t>(i)] / (1.0 - opt.eps));
        const double b_new = std::min(b, std::max(1.0, worst));
        if (b_new < b - 1e-15) added_since_b_progress = 0;
        b = b_new;
    };

    int k = 0;
    for (k = 1; k <= opt.max_iterations && !queue.empty(); ++k) {
        if (v.size() >= static_cast<int>(opt.max_vertices)) {
            res.reason = TerminationReason::VertexCap;
            break;
        }
        auto batch_idx = natural_selection(queue, v, vertex_norm, k, opt);

        // freeze W_k: vertices all of whose unevaluated children are in this batch,
        // with near-duplicates collapsed; fall back to the whole of V_k when empty
        std::vector<int> in_batch_children(static_cast<size_t>(v.size()), 0);
        for (auto qi : batch_idx) {
            const int p = queue[qi].parent;
            if (p >= 0) ++in_batch_children[static_cast<size_t>(p)];
        }
        std::vector<int> w_idx;
        for (int i = 0; i < v.size(); ++i)
            if (children_pending[static_cast<size_t>(i)] <= in_batch_children[static_cast<size_t>(i)])
                w_idx.push_back(i);
        if (w_idx.empty()) {
            w_idx.resize(static_cast<size_t>(v.size()));
            std::iota(w_idx.begin(), w_idx.end(), 0);
        }
        std::vector<int> w_dedup;
        for (int i : w_idx) {
            bool dup = false;
            for (int j : w_dedup)
                if (near_duplicate(v.v.col(i), v.v.col(j), kind, dedup_tol)) {
                    dup = true;
                    break;
                }
            if (!dup) w_dedup.push_back(i);
        }
        PolytopeVertices w(kind, Matrix(s, static_cast<Eigen::Index>(w_dedup.size())));
        for (size_t i = 0; i < w_dedup.size(); ++i)
            w.v.col(static_cast<Eigen::Index>(i)) = v.v.col(w_dedup[i]);

        // ---- parallel phase: evaluate N against the frozen co_* W_k --------
        struct EvalOut {
            double n = std::numeric_limits<double>::infinity();
            bool degenerate = false;
        };
        std::vector<EvalOut> results(batch_idx.size());
        auto eval_range = [&](std::size_t lo, std::size_t hi) {
            std::vector<int> warm;
            int warm_parent = -2;
            for (std::size_t i = lo; i < hi; ++i) {
                const auto& child = queue[batch_idx[i]];
                if (kind == HullKind::Cone && estimate_inside_by_domination(w, child.x)) {
                    results[i].n = 1.0 - 2.0 * opt.eps;  // certified inside, no LP
                    continue;
                }
                NormResult nr = minkowski_norm(w, child.x,
                                               child.parent == warm_parent && !warm.empty()
                                                   ? &warm
                                                   : nullptr);
                results[i].n = nr.value;
                results[i].degenerate = nr.degenerate;
                if (!nr.basis.empty()) {
                    warm = nr.basis;
                    warm_parent = child.parent;
                }
            }
        };
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned want = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : hw;
        if (want > 1 && batch_idx.size() >= 64) {
            std::vector<std::thread> pool;
            const std::size_t chunk = (batch_idx.size() + want - 1) / want;
            for (unsigned t = 0; t < want; ++t) {
                const std::size_t lo = t * chunk, hi = std::min(batch_idx.size(), lo + chunk);
                if (lo < hi) pool.emplace_back(eval_range, lo, hi);
            }
            for (auto& th : pool) th.join();
        } else {
            eval_range(0, batch_idx.size());
        }

        // ---- serial commit: add all outsiders at once -----------------------
        std::size_t added = 0;
        std::vector<ProductWord> new_words;
        for (std::size_t i = 0; i < batch_idx.size(); ++i) {
            const auto& child = queue[batch_idx[i]];
            if (results[i].degenerate) dedup_tol = std::max(dedup_tol, 1e-9);
            --children_pending[static_cast<size_t>(child.parent)];
            bool dup = false;
            for (int c = 0; c < v.size() && !dup; ++c)
                dup = near_duplicate(child.x, v.v.col(c), kind, dedup_tol);
            if (dup) continue;
            if (results[i].n > 1.0 - opt.eps) {
                VertexInfo meta = v.info[static_cast<size_t>(child.parent)];
                meta.word.indices.push_back(child.letter);
                new_words.push_back(meta.word);
                push_vertex(child.x, std::move(meta), results[i].n, k);
                ++added;
            }
        }
        added_since_b_progress += added;
        // remove the evaluated entries from the queue (descending positions)
        std::sort(batch_idx.rbegin(), batch_idx.rend());
        for (auto qi : batch_idx) queue.erase(queue.begin() + static_cast<long>(qi));

        recompute_b();
        if (queue.empty()) b = 1.0;
        res.bounds.upper = b * rho_c / delta;
        IterationTrace tr;
        tr.iteration = k;
        tr.v_size = static_cast<std::size_t>(v.size());
        tr.batch = batch_idx.size();
        tr.added = added;
        tr.b = b;
        tr.lower = res.bounds.lower;
        tr.upper = res.bounds.upper;
        tr.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        res.trace.push_back(tr);

        if (auto better = restart_check(set, new_words, rho_c)) {
            res.better_candidate = better;
            res.reason = TerminationReason::RestartRequested;
            break;
        }
        if (added_since_b_progress > opt.growth_budget) {
            res.growth_budget_hit = true;
            res.reason = TerminationReason::VertexCap;
            break;
        }
    }
    res.iterations = static_cast<int>(res.trace.size());

    if (queue.empty() && !res.better_candidate) {
        res.reason = TerminationReason::InvariantPolytope;
        b = 1.0;
        res.bounds.upper = rho_c / delta;
        res.bounds.exact = (delta == 1.0);
        res.bounds.upper_evidence = "invariant polytope with " + std::to_string(v.size()) +
                                    " vertices (b = 1, delta = " + std::to_string(delta) + ")";
    } else {
        res.bounds.upper = b * rho_c / delta;
        res.bounds.upper_evidence = "intermediate bound b = " + std::to_string(b);
    }
    res.vertices = std::move(v);
    return res;
}

namespace {

EngineResult compute_jsr_core(const MatrixSet& set, const EngineOptions& opt, int depth);

EngineResult combine_blocks(const MatrixSet& set, const std::vector<MatrixSet>& blocks,
                            const EngineOptions& opt, int depth) {
    EngineResult best;
    best.bounds.lower = 0.0;
    best.bounds.upper = 0.0;
    best.bounds.exact = true;
    for (const auto& blk : blocks) {
        EngineResult r = compute_jsr_core(blk, opt, depth + 1);
        if (r.bounds.lower > best.bounds.lower) {
            best.bounds.lower = r.bounds.lower;
            best.smp_words = r.smp_words;
            best.last_run = std::move(r.last_run);
        }
        best.bounds.upper = std::max(best.bounds.upper, r.bounds.upper);
        best.bounds.exact = best.bounds.exact && r.bounds.exact;
        best.restarts += r.restarts;
        best.used_delta_fallback |= r.used_delta_fallback;
    }
    best.bounds.exact = best.bounds.exact &&
                        best.bounds.upper <= best.bounds.lower * (1.0 + 1e-12);
    if (best.bounds.exact) best.bounds.upper = best.bounds.lower;
    best.bounds.lower_evidence = "max over diagonal blocks";
    best.bounds.upper_evidence = "max over diagonal blocks";
    best.reducibility.irreducible = false;
    (void)set;
    return best;
}

EngineResult compute_jsr_core(const MatrixSet& set, const EngineOptions& opt, int depth) {
    EngineResult out;
    if (set.dim() == 1) {
        double best = 0.0;
        int arg = 1;
        for (int j = 1; j <= set.count(); ++j) {
            const double a = std::abs(set.scale * set.at(j)(0, 0));
            if (a > best) {
                best = a;
                arg = j;
            }
        }
        out.bounds.lower = out.bounds.upper = best;
        out.bounds.exact = true;
        out.bounds.lower_evidence = out.bounds.upper_evidence = "1x1 blocks";
        out.smp_words.push_back(ProductWord{{arg}});
        return out;
    }

    if (!opt.skip_reducibility_check && depth < 8) {
        out.reducibility = find_common_invariant_subspace(set);
        if (out.reducibility.blocks) {
            EngineResult combined = combine_blocks(set, *out.reducibility.blocks, opt, depth);
            combined.reducibility = out.reducibility;
            return combined;
        }
    }

    SearchReport search = modified_gripenberg(set, opt.grip_n, opt.grip_d);
    if (search.lower_bound <= 0.0) {
        // all candidates nilpotent-ish; fall back to brute bounds
        out.bounds = brute_force_bounds(set, std::min(6, opt.grip_d));
        out.bounds.exact = out.bounds.upper <= out.bounds.lower + 1e-300;
        return out;
    }

    PolytopeOptions popt = opt.polytope;
    for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
        CandidateSet cands = build_candidates(set, search, popt.tau);
        RunResult rr = run(set, cands, popt);
        if (rr.better_candidate) {
            ++out.restarts;
            SearchReport next;
            next.candidates = {*rr.better_candidate};
            next.lower_bound = scaled_normalized_rho(set, *rr.better_candidate);
            next.nearly_pool = search.nearly_pool;
            for (const auto& w : search.candidates)
                next.nearly_pool.emplace_back(w, search.lower_bound / set.scale);
            next.evaluations = search.evaluations;
            search = std::move(next);
            if (attempt == opt.max_restarts) {
                // out of restarts: one certified delta-fallback pass
                popt.delta = 1.0 - 1e-9;
                cands = build_candidates(set, search, popt.tau);
                rr = run(set, cands, popt);
                out.used_delta_fallback = true;
            } else {
                continue;
            }
        } else if (rr.growth_budget_hit && popt.delta == 1.0) {
            popt.delta = 1.0 - 1e-9;
            rr = run(set, cands, popt);
            out.used_delta_fallback = true;
        }
        out.bounds = rr.bounds;
        for (const auto& c : cands.smps) out.smp_words.push_back(c.word);
        out.last_run = std::move(rr);
        return out;
    }
    throw NumericalError("unreachable restart loop exit");
}

}  // namespace

EngineResult compute_jsr(const MatrixSet& set, const EngineOptions& opt) {
    return compute_jsr_core(set, opt, 0);
}

}  // namespace jsr
