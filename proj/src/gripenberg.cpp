#include "jsr/gripenberg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace jsr {
namespace {

struct Node {
    ProductWord word;
    Matrix prod;
    double norm_d = 0.0;  // ||P||^{1/d}
};

std::vector<Matrix> effective_matrices(const MatrixSet& set) {
    std::vector<Matrix> out;
    out.reserve(set.matrices.size());
    for (const auto& m : set.matrices) out.push_back(set.scale * m);
    return out;
}

void dedup_canonical(std::vector<ProductWord>& words) {
    for (auto& w : words) w = canonicalize_word(w);
    std::sort(words.begin(), words.end(), [](const ProductWord& a, const ProductWord& b) {
        return a.indices < b.indices;
    });
    words.erase(std::unique(words.begin(), words.end()), words.end());
}

void update_nearly_pool(std::vector<std::pair<ProductWord, double>>& pool, double rho_c) {
    const double floor = 0.99 * rho_c;
    std::erase_if(pool, [&](const auto& p) { return p.second < floor; });
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
        return a.second > b.second || (a.second == b.second && a.first.indices < b.first.indices);
    });
    pool.erase(std::unique(pool.begin(), pool.end(),
                           [](const auto& a, const auto& b) {
                               return a.first.indices == b.first.indices;
                           }),
               pool.end());
    if (pool.size() > 64) pool.resize(64);
}

SearchReport gripenberg_core(const MatrixSet& set, int n_keep, int depth,
                             const std::uint64_t* seed) {
    if (n_keep < 1 || depth < 1) throw ParseError("modified_gripenberg requires N, D >= 1");
    const auto mats = effective_matrices(set);
    const int j_count = set.count();
    const int s = set.dim();

    SearchReport rep;
    std::vector<Node> frontier{{ProductWord{}, Matrix::Identity(s, s)}};
    std::vector<ProductWord> cands;
    std::mt19937_64 rng(seed ? *seed : 0);

    for (int d = 1; d <= depth && !frontier.empty(); ++d) {
        std::vector<Node> next;
        next.reserve(frontier.size() * j_count);
        for (const auto& node : frontier)
            for (int j = 1; j <= j_count; ++j) {
                Node c;
                c.word = node.word;
                c.word.indices.push_back(j);
                c.prod = mats[j - 1] * node.prod;
                next.push_back(std::move(c));
            }

        double depth_max_rho = 0.0;
        std::vector<double> rho_d(next.size());
        for (size_t i = 0; i < next.size(); ++i) {
            rho_d[i] = std::pow(spectral_radius(next[i].prod), 1.0 / d);
            next[i].norm_d = std::pow(operator_norm(next[i].prod), 1.0 / d);
            ++rep.evaluations;
            depth_max_rho = std::max(depth_max_rho, rho_d[i]);
        }
        if (depth_max_rho > rep.lower_bound * (1.0 + 1e-12)) {
            rep.lower_bound = depth_max_rho;
            cands.clear();
        }
        for (size_t i = 0; i < next.size(); ++i) {
            if (rho_d[i] >= rep.lower_bound * (1.0 - 1e-12)) cands.push_back(next[i].word);
            if (rho_d[i] >= 0.99 * rep.lower_bound && static_cast<int>(next[i].word.indices.size()) >= 1)
                rep.nearly_pool.emplace_back(next[i].word, rho_d[i]);
        }
        update_nearly_pool(rep.nearly_pool, rep.lower_bound);

        // prune: products whose norms are less than rho_c are removed (ties survive)
        std::vector<Node> kept;
        for (size_t i = 0; i < next.size(); ++i)
            if (next[i].norm_d >= rep.lower_bound * (1.0 - 1e-12)) kept.push_back(std::move(next[i]));

        if (static_cast<int>(kept.size()) > 2 * n_keep) {
            if (seed) {
                std::vector<size_t> idx(kept.size());
                std::iota(idx.begin(), idx.end(), size_t{0});
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(static_cast<size_t>(2 * n_keep));
                std::sort(idx.begin(), idx.end());
                std::vector<Node> sel;
                sel.reserve(idx.size());
                for (size_t i : idx) sel.push_back(std::move(kept[i]));
                kept = std::move(sel);
            } else {
                std::sort(kept.begin(), kept.end(), [](const Node& a, const Node& b) {
                    return a.norm_d < b.norm_d ||
                           (a.norm_d == b.norm_d && a.word.indices < b.word.indices);
                });
                std::vector<Node> sel;
                sel.reserve(static_cast<size_t>(2 * n_keep));
                for (int i = 0; i < n_keep; ++i) sel.push_back(std::move(kept[i]));
                for (size_t i = kept.size() - n_keep; i < kept.size(); ++i)
                    sel.push_back(std::move(kept[i]));
                kept = std::move(sel);
            }
        }
        frontier = std::move(kept);
        rep.frontier_trace.push_back(static_cast<int>(frontier.size()));
    }

    dedup_canonical(cands);
    rep.candidates = std::move(cands);
    return rep;
}

}  // namespace

SearchReport modified_gripenberg(const MatrixSet& set, int n_keep, int depth) {
    return gripenberg_core(set, n_keep, depth, nullptr);
}

SearchReport random_modified_gripenberg(const MatrixSet& set, int n_keep, int depth,
                                        std::uint64_t seed) {
    return gripenberg_core(set, n_keep, depth, &seed);
}

SearchReport classic_gripenberg(const MatrixSet& set, double delta_acc, int depth_cap,
                                std::size_t frontier_cap) {
    if (!(delta_acc > 0.0) || delta_acc > 1.0) throw ParseError("delta_acc must lie in (0, 1]");
    if (depth_cap < 1) throw ParseError("depth cap must be >= 1");
    const auto mats = effective_matrices(set);
    const int j_count = set.count();
    const int s = set.dim();

    SearchReport rep;
    rep.upper_bound = std::numeric_limits<double>::infinity();
    std::vector<Node> frontier{{ProductWord{}, Matrix::Identity(s, s)}};
    std::vector<ProductWord> cands;

    for (int d = 1; d <= depth_cap && !frontier.empty(); ++d) {
        if (frontier.size() * static_cast<size_t>(j_count) > frontier_cap)
            throw BudgetError("classic Gripenberg frontier exceeded its memory budget");
        std::vector<Node> next;
        next.reserve(frontier.size() * j_count);
        for (const auto& node : frontier)
            for (int j = 1; j <= j_count; ++j) {
                Node c;
                c.word = node.word;
                c.word.indices.push_back(j);
                c.prod = mats[j - 1] * node.prod;
                next.push_back(std::move(c));
            }

        double depth_max_rho = 0.0, depth_max_norm = 0.0;
        std::vector<double> rho_d(next.size());
        for (size_t i = 0; i < next.size(); ++i) {
            rho_d[i] = std::pow(spectral_radius(next[i].prod), 1.0 / d);
            next[i].norm_d = std::pow(operator_norm(next[i].prod), 1.0 / d);
            ++rep.evaluations;
            depth_max_rho = std::max(depth_max_rho, rho_d[i]);
            depth_max_norm = std::max(depth_max_norm, next[i].norm_d);
        }
        if (depth_max_rho > rep.lower_bound * (1.0 + 1e-12)) {
            rep.lower_bound = depth_max_rho;
            cands.clear();
        }
        for (size_t i = 0; i < next.size(); ++i) {
            if (rho_d[i] >= rep.lower_bound * (1.0 - 1e-12)) cands.push_back(next[i].word);
            if (rho_d[i] >= 0.99 * rep.lower_bound)
                rep.nearly_pool.emplace_back(next[i].word, rho_d[i]);
        }
        update_nearly_pool(rep.nearly_pool, rep.lower_bound);
        rep.upper_bound = std::min(*rep.upper_bound, depth_max_norm);

        const double threshold = rep.lower_bound / delta_acc;
        std::erase_if(next, [&](const Node& n) { return n.norm_d < threshold * (1.0 - 1e-12); });
        frontier = std::move(next);
        rep.frontier_trace.push_back(static_cast<int>(frontier.size()));
    }

    if (frontier.empty()) {
        // every branch was cut below b_-/delta: JSR <= b_-/delta
        rep.upper_bound = std::min(*rep.upper_bound, rep.lower_bound / delta_acc);
        rep.upper_final = true;
    }
    rep.upper_bound = std::max(*rep.upper_bound, rep.lower_bound);
    dedup_canonical(cands);
    rep.candidates = std::move(cands);
    return rep;
}

JsrBounds brute_force_bounds(const MatrixSet& set, int k, std::int64_t budget) {
    if (k < 1) throw ParseError("brute force requires k >= 1");
    const auto mats = effective_matrices(set);
    const int j_count = set.count();
    const int s = set.dim();

    std::int64_t total = 0, level = 1;
    for (int d = 1; d <= k; ++d) {
        level *= j_count;
        total += level;
        if (total > budget) throw BudgetError("brute force budget exceeded: J^k too large");
    }

    JsrBounds bounds;
    bounds.lower = 0.0;
    bounds.upper = std::numeric_limits<double>::infinity();
    std::vector<Matrix> prods{Matrix::Identity(s, s)};
    int best_len = 0;
    for (int d = 1; d <= k; ++d) {
        std::vector<Matrix> next;
        next.reserve(prods.size() * j_count);
        double depth_max_norm = 0.0;
        for (const auto& p : prods)
            for (int j = 0; j < j_count; ++j) {
                Matrix q = mats[j] * p;
                const double rho = std::pow(spectral_radius(q), 1.0 / d);
                depth_max_norm = std::max(depth_max_norm, std::pow(operator_norm(q), 1.0 / d));
                if (rho > bounds.lower) {
                    bounds.lower = rho;
                    best_len = d;
                }
                next.push_back(std::move(q));
            }
        bounds.upper = std::min(bounds.upper, depth_max_norm);
        prods = std::move(next);
    }
    bounds.exact = bounds.upper <= bounds.lower * (1.0 + 1e-12);
    bounds.lower_evidence = "max normalized spectral radius at length " + std::to_string(best_len);
    bounds.upper_evidence = "min over n<=k of max ||product||^{1/n}";
    return bounds;
}

}  // namespace jsr
