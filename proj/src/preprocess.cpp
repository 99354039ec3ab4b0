#include "jsr/preprocess.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <functional>

namespace jsr {
namespace {

bool invariance_residual_ok(const MatrixSet& set, const Matrix& u) {
    for (const auto& a : set.matrices) {
        const Matrix au = a * u;
        const Matrix resid = au - u * (u.transpose() * au);
        if (resid.norm() > 1e-8 * std::max(1e-300, a.norm())) return false;
    }
    return true;
}

Matrix orthonormalize(const Matrix& cols) {
    Eigen::HouseholderQR<Matrix> qr(cols);
    Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
    return q;
}

// Tarjan SCC on the union zero-pattern digraph (edge j -> i when A(i,j) != 0).
std::vector<std::vector<int>> strongly_connected_components(const MatrixSet& set) {
    const int s = set.dim();
    std::vector<std::vector<int>> adj(s);
    for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i) {
            bool nz = false;
            for (const auto& a : set.matrices) nz |= (a(i, j) != 0.0);
            if (nz && i != j) adj[j].push_back(i);
        }
    std::vector<int> index(s, -1), low(s, 0), stack;
    std::vector<bool> on_stack(s, false);
    std::vector<std::vector<int>> comps;
    int counter = 0;
    std::function<void(int)> strongconnect = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w : adj[v]) {
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            for (;;) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
                if (w == v) break;
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
    };
    for (int v = 0; v < s; ++v)
        if (index[v] < 0) strongconnect(v);
    return comps;
}

std::vector<MatrixSet> blocks_from_basis(const MatrixSet& set, const Matrix& u) {
    const int s = set.dim();
    const int d = static_cast<int>(u.cols());
    Eigen::HouseholderQR<Matrix> qr(u);
    Matrix q = qr.householderQ();
    Matrix u1 = q.leftCols(d), u2 = q.rightCols(s - d);
    std::vector<Matrix> b1, b2;
    for (const auto& a : set.matrices) {
        b1.push_back(u1.transpose() * a * u1);
        b2.push_back(u2.transpose() * a * u2);
    }
    return {MatrixSet(std::move(b1), set.scale), MatrixSet(std::move(b2), set.scale)};
}

}  // namespace

ReducibilityReport find_common_invariant_subspace(const MatrixSet& set) {
    const int s = set.dim();
    ReducibilityReport rep;

    // default case tag from the raw entries (refined by callers per candidate)
    bool nonneg = true;
    for (const auto& a : set.matrices) nonneg &= (a.minCoeff() >= -1e-14);
    rep.case_tag = nonneg ? CaseTag::P : CaseTag::R;

    if (s <= 1) {
        rep.notes.push_back("dimension 1: trivially irreducible");
        return rep;
    }

    // (a) permutation block structure from the union zero pattern
    auto comps = strongly_connected_components(set);
    if (comps.size() > 1) {
        // Tarjan emits components so that successors come first; a closed set of
        // coordinates is the first component (its successors lie inside itself).
        Matrix u = Matrix::Zero(s, static_cast<int>(comps.front().size()));
        for (size_t i = 0; i < comps.front().size(); ++i) u(comps.front()[i], static_cast<int>(i)) = 1.0;
        if (invariance_residual_ok(set, u)) {
            rep.irreducible = false;
            rep.subspace_basis = u;
            // diagonal blocks, one per component
            std::vector<MatrixSet> blocks;
            for (const auto& comp : comps) {
                const int d = static_cast<int>(comp.size());
                std::vector<Matrix> sub;
                for (const auto& a : set.matrices) {
                    Matrix b(d, d);
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) b(i, j) = a(comp[i], comp[j]);
                    sub.push_back(std::move(b));
                }
                blocks.emplace_back(std::move(sub), set.scale);
            }
            rep.blocks = std::move(blocks);
            rep.notes.push_back("zero-pattern permutation block structure (heuristic a)");
            return rep;
        }
    }

    // (b) eigenvector-closure sweep
    for (const auto& a : set.matrices) {
        Eigen::EigenSolver<Matrix> es(a);
        if (es.info() != Eigen::Success) continue;
        for (Eigen::Index k = 0; k < s; ++k) {
            for (int part = 0; part < 2; ++part) {
                Vector seed = part == 0 ? Vector(es.eigenvectors().col(k).real())
                                        : Vector(es.eigenvectors().col(k).imag());
                if (seed.norm() < 1e-10) continue;
                Matrix q = seed.normalized();
                bool grew = true;
                while (grew && q.cols() < s) {
                    grew = false;
                    for (const auto& m : set.matrices) {
                        for (Eigen::Index c = 0; c < q.cols() && q.cols() < s; ++c) {
                            Vector w = m * q.col(c);
                            w -= q * (q.transpose() * w);
                            if (w.norm() > 1e-10 * std::max(1.0, m.norm())) {
                                q.conservativeResize(s, q.cols() + 1);
                                q.col(q.cols() - 1) = w.normalized();
                                q = orthonormalize(q);
                                grew = true;
                            }
                        }
                    }
                }
                if (q.cols() < s && invariance_residual_ok(set, q)) {
                    rep.irreducible = false;
                    rep.subspace_basis = q;
                    rep.blocks = blocks_from_basis(set, q);
                    rep.notes.push_back("eigenvector-closure sweep (heuristic b)");
                    return rep;
                }
            }
        }
    }

    // (c) difference subspace {x : sum x = 0} and its complement span{1}
    {
        Matrix diff(s, s - 1);
        diff.setZero();
        for (int i = 0; i < s - 1; ++i) {
            diff(i, i) = 1.0;
            diff(i + 1, i) = -1.0;
        }
        Matrix u = orthonormalize(diff);
        if (invariance_residual_ok(set, u)) {
            rep.irreducible = false;
            rep.subspace_basis = u;
            rep.blocks = blocks_from_basis(set, u);
            rep.notes.push_back("common invariant difference subspace (heuristic c, minimal stand-in)");
            return rep;
        }
        Matrix ones = Matrix::Constant(s, 1, 1.0 / std::sqrt(static_cast<double>(s)));
        if (invariance_residual_ok(set, ones)) {
            rep.irreducible = false;
            rep.subspace_basis = ones;
            rep.blocks = blocks_from_basis(set, ones);
            rep.notes.push_back("all-ones direction invariant (heuristic c, minimal stand-in)");
            return rep;
        }
    }

    rep.notes.push_back("no heuristic fired; irreducibility not proven");
    return rep;
}

CaseTag classify_case(const MatrixSet& set, const Vector& leading_vector) {
    if (leading_vector.size() == 0) return CaseTag::C;  // no real leading eigenvector
    bool nonneg_entries = true;
    for (const auto& a : set.matrices) nonneg_entries &= (a.minCoeff() >= -1e-14);
    if (nonneg_entries) {
        Vector v = leading_vector;
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        if (v(big) < 0) v = -v;
        if (v.minCoeff() >= -1e-9 * std::max(1e-300, v.cwiseAbs().maxCoeff())) return CaseTag::P;
    }
    return CaseTag::R;
}

}  // namespace jsr
