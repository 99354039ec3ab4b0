#include "jsr/norms.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "jsr/simplex.hpp"

namespace jsr {

PolytopeVertices::PolytopeVertices(HullKind k, Matrix vertices) : kind(k), v(std::move(vertices)) {
    info.resize(static_cast<size_t>(v.cols()));
}

void PolytopeVertices::append(const Vector& x, VertexInfo meta) {
    v.conservativeResize(x.size(), v.cols() + 1);
    v.col(v.cols() - 1) = x;
    info.push_back(std::move(meta));
    pinv_cache_.reset();
}

const Matrix& PolytopeVertices::pseudoinverse() const {
    if (!pinv_cache_) {
        Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cutoff = 1e-13 * std::max(1.0, sv.size() ? sv(0) : 0.0);
        Vector inv = Vector::Zero(sv.size());
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
        pinv_cache_ = std::make_shared<Matrix>(svd.matrixV() * inv.asDiagonal() *
                                               svd.matrixU().transpose());
    }
    return *pinv_cache_;
}

NormResult minkowski_norm(const PolytopeVertices& vtx, const Vector& x,
                          const std::vector<int>* warm) {
    const int s = vtx.dim();
    const int m = vtx.size();
    if (x.size() != s) throw NumericalError("minkowski_norm: dimension mismatch");
    if (m == 0) throw NumericalError("minkowski_norm: empty vertex list");

    NormResult res;
    if (x.lpNorm<Eigen::Infinity>() == 0.0) {
        res.value = 0.0;
        res.certificate = Vector::Zero(vtx.kind == HullKind::Symmetrized ? m : m);
        return res;
    }

    Matrix a;
    Vector c;
    if (vtx.kind == HullKind::Symmetrized) {
        // min 1'(p+q)  s.t.  V(p - q) = x,  p,q >= 0   =>  ||t||_1 with t = p - q
        a.resize(s, 2 * m);
        a << vtx.v, -vtx.v;
        c = Vector::Ones(2 * m);
    } else {
        // min 1'u  s.t.  Vu - w = x,  u,w >= 0
        for (int i = 0; i < s; ++i)
            if (x(i) < -1e-9 * std::max(1.0, x.cwiseAbs().maxCoeff()))
                throw NumericalError("cone norm queried at a point with negative coordinates");
        a.resize(s, m + s);
        a << vtx.v, -Matrix::Identity(s, s);
        c = Vector::Zero(m + s);
        c.head(m).setOnes();
    }

    LpResult lp = solve_standard_lp(a, x, c, warm);
    res.lp_pivots = lp.pivots;
    switch (lp.status) {
        case LpStatus::Infeasible:
            res.value = std::numeric_limits<double>::infinity();
            res.status = NormStatus::Exact;
            res.certificate = lp.dual;
            return res;
        case LpStatus::PivotLimit:
            res.degenerate = true;
            res.status = NormStatus::UpperOnly;
            res.value = std::numeric_limits<double>::infinity();
            return res;
        case LpStatus::Optimal:
            break;
    }
    res.value = lp.objective;
    res.status = NormStatus::Exact;
    res.basis = lp.basis;
    if (vtx.kind == HullKind::Symmetrized) {
        res.certificate = Vector(lp.x.head(m) - lp.x.segment(m, m));
    } else {
        res.certificate = Vector(lp.x.head(m));
    }
    return res;
}

double estimate_upper_by_coefficients(const PolytopeVertices& vtx, const Vector& x,
                                      const Vector& t) {
    if (t.size() != vtx.size()) throw NumericalError("coefficient vector size mismatch");
    const double resid = (vtx.v * t - x).norm();
    if (resid > 1e-8 * std::max(1.0, x.norm()))
        throw NumericalError("coefficient vector does not represent the point");
    if (vtx.kind == HullKind::Cone && t.minCoeff() < -1e-12)
        throw NumericalError("cone representation must be nonnegative");
    return t.lpNorm<1>();
}

double estimate_lower_by_pseudoinverse(const PolytopeVertices& vtx, const Vector& x) {
    return (vtx.pseudoinverse() * x).norm();
}

bool estimate_outside_by_hyperplane(const PolytopeVertices& vtx, const Vector& x,
                                    const Vector& w) {
    for (int i = 0; i < vtx.size(); ++i) {
        const double ip = w.dot(vtx.v.col(i));
        const bool ok = vtx.kind == HullKind::Symmetrized ? std::abs(ip) <= 1.0 + 1e-12
                                                          : ip <= 1.0 + 1e-12;
        if (!ok) throw NumericalError("functional is not bounded by 1 on the vertex set");
    }
    return w.dot(x) > 1.0 + 1e-12;
}

bool estimate_inside_by_domination(const PolytopeVertices& vtx, const Vector& x) {
    if (vtx.kind != HullKind::Cone) return false;
    for (int i = 0; i < vtx.size(); ++i)
        if ((x.array() <= vtx.v.col(i).array() + 1e-14).all()) return true;
    return false;
}

bool monotone_norm_inclusion(const PolytopeVertices& w, const PolytopeVertices& v) {
    if (w.kind != v.kind || w.dim() != v.dim()) return false;
    for (int i = 0; i < w.size(); ++i) {
        NormResult r = minkowski_norm(v, w.v.col(i));
        if (!(r.value <= 1.0 + 1e-12)) return false;
    }
    return true;
}

}  // namespace jsr
