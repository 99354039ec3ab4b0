#include "jsr/simplex.hpp"

#include <Eigen/LU>
#include <cmath>

namespace jsr {
namespace {

constexpr double kRcTol = 1e-9;     // reduced-cost optimality tolerance
constexpr double kPivTol = 1e-11;   // minimal pivot magnitude in the ratio test
constexpr double kFeasTol = 1e-9;   // basic-variable feasibility tolerance
constexpr int kRefactorEvery = 64;

struct Tableau {
    const Matrix& a;  // r x n, rows already sign-normalized
    const Vector& b;  // >= 0
    int r, n;

    std::vector<int> basis;       // r column indices into [0, n + r): >= n are artificials
    Matrix binv;
    Vector xb;                    // current basic values = binv * b

    Vector column(int j) const {
        if (j < n) return a.col(j);
        Vector e = Vector::Zero(r);
        e(j - n) = 1.0;
        return e;
    }

    void refactor() {
        Matrix bmat(r, r);
        for (int i = 0; i < r; ++i) bmat.col(i) = column(basis[i]);
        Eigen::FullPivLU<Matrix> lu(bmat);
        if (!lu.isInvertible()) throw NumericalError("simplex basis became singular");
        binv = lu.inverse();
        xb = binv * b;
    }
};

// One simplex phase: minimize costs `c_ext` (length n + r) from the current basis.
// Returns true on optimality, false on pivot-limit.
bool run_phase(Tableau& t, const Vector& c_ext, bool allow_artificial_entering, int pivot_cap,
               int& pivots, Vector& y_out, int refactor_every) {
    const int ncols = allow_artificial_entering ? t.n + t.r : t.n;
    const int bland_after = 10 * (t.r + t.n);
    int since_refactor = 0;
    int local = 0;
    for (;;) {
        Vector cb(t.r);
        for (int i = 0; i < t.r; ++i) cb(i) = c_ext(t.basis[i]);
        Vector y = t.binv.transpose() * cb;
        y_out = y;

        const bool bland = local > bland_after;
        int enter = -1;
        double best = -kRcTol;
        Vector yta = t.a.transpose() * y;
        for (int j = 0; j < ncols; ++j) {
            const double rc = (j < t.n ? c_ext(j) - yta(j) : c_ext(j) - y(j - t.n));
            if (rc < -kRcTol) {
                if (bland) { enter = j; break; }
                if (rc < best) { best = rc; enter = j; }
            }
        }
        if (enter < 0) {
            // accept optimality only when priced against a freshly factorized
            // basis: eta-update drift can hide improving columns
            if (since_refactor == 0) return true;
            t.refactor();
            since_refactor = 0;
            continue;
        }

        Vector d = t.binv * t.column(enter);
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.r; ++i) {
            if (d(i) > kPivTol) {
                const double ratio = std::max(t.xb(i), 0.0) / d(i);
                const bool tied = leave >= 0 && ratio < best_ratio + 1e-12;
                // among tied ratios pick the largest pivot (keeps the basis well
                // conditioned); under Bland's rule fall back to the index rule
                const bool better = tied && (bland ? t.basis[i] < t.basis[leave]
                                                   : d(i) > d(leave));
                if (ratio < best_ratio - 1e-12 || better) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw NumericalError("simplex: unbounded direction in a bounded problem");

        // eta update of binv
        const double piv = d(leave);
        Vector row = t.binv.row(leave) / piv;
        for (int i = 0; i < t.r; ++i)
            if (i != leave) t.binv.row(i) -= d(i) * row.transpose();
        t.binv.row(leave) = row.transpose();
        t.basis[leave] = enter;
        t.xb = t.binv * t.b;

        ++pivots;
        ++local;
        if (++since_refactor >= refactor_every) {
            t.refactor();
            since_refactor = 0;
        }
        if (pivots > pivot_cap) return false;
    }
}

LpResult solve_attempt(const Matrix& a, const Vector& b, const Vector& c,
                       const Vector& row_sign, const std::vector<int>* warm,
                       int refactor_every) {
    const int r = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());

    Tableau t{a, b, r, n, {}, Matrix(), Vector()};
    LpResult res;
    const int pivot_cap = 50 * (r + n) + 1000;

    bool feasible_basis = false;
    if (warm && static_cast<int>(warm->size()) == r) {
        bool valid = true;
        for (int j : *warm)
            if (j < 0 || j >= n) valid = false;
        if (valid) {
            t.basis = *warm;
            try {
                t.refactor();
                feasible_basis = t.xb.minCoeff() >= -kFeasTol;
            } catch (const NumericalError&) {
                feasible_basis = false;
            }
        }
    }

    Vector y;
    if (!feasible_basis) {
        // Phase I from the all-artificial basis.
        t.basis.resize(r);
        for (int i = 0; i < r; ++i) t.basis[i] = n + i;
        t.binv = Matrix::Identity(r, r);
        t.xb = b;
        Vector c1 = Vector::Zero(n + r);
        c1.tail(r).setOnes();
        if (!run_phase(t, c1, true, pivot_cap, res.pivots, y, refactor_every)) {
            res.status = LpStatus::PivotLimit;
            return res;
        }
        double art = 0.0;
        for (int i = 0; i < r; ++i)
            if (t.basis[i] >= n) art += std::max(t.xb(i), 0.0);
        if (art > 1e-7 * std::max(1.0, b.maxCoeff())) {
            res.status = LpStatus::Infeasible;
            res.dual = row_sign.asDiagonal() * y;  // Farkas: y'b > 0, y'A <= 0 (original signs)
            return res;
        }
        // Pivot remaining artificials out where possible.
        for (int i = 0; i < r; ++i) {
            if (t.basis[i] < n) continue;
            int enter = -1;
            for (int j = 0; j < n && enter < 0; ++j) {
                const double piv = t.binv.row(i).dot(a.col(j));
                bool in_basis = false;
                for (int k = 0; k < r; ++k) in_basis |= (t.basis[k] == j);
                if (!in_basis && std::abs(piv) > 1e-8) enter = j;
            }
            if (enter >= 0) {
                t.basis[i] = enter;
                t.refactor();
            }
            // else: redundant row; the artificial stays basic at level 0
        }
    }

    Vector c2 = Vector::Zero(n + r);
    c2.head(n) = c;
    if (!run_phase(t, c2, false, pivot_cap, res.pivots, y, refactor_every)) {
        res.status = LpStatus::PivotLimit;
        return res;
    }

    res.status = LpStatus::Optimal;
    res.x = Vector::Zero(n);
    for (int i = 0; i < r; ++i)
        if (t.basis[i] < n) res.x(t.basis[i]) = std::max(t.xb(i), 0.0);
    res.objective = c.dot(res.x);
    res.dual = row_sign.asDiagonal() * y;
    res.basis = t.basis;
    return res;
}

}  // namespace

LpResult solve_standard_lp(const Matrix& a_in, const Vector& b_in, const Vector& c,
                           const std::vector<int>* warm) {
    const int r = static_cast<int>(a_in.rows());
    const int n = static_cast<int>(a_in.cols());
    if (b_in.size() != r || c.size() != n) throw NumericalError("LP dimension mismatch");

    // sign-normalize rows so b >= 0
    Matrix a = a_in;
    Vector b = b_in;
    Vector row_sign = Vector::Ones(r);
    for (int i = 0; i < r; ++i)
        if (b(i) < 0) {
            a.row(i) = -a.row(i);
            b(i) = -b(i);
            row_sign(i) = -1.0;
        }

    try {
        return solve_attempt(a, b, c, row_sign, warm, kRefactorEvery);
    } catch (const NumericalError&) {
        // ill-conditioned pivot sequence: retry cold with a fresh factorization
        // after every pivot
        return solve_attempt(a, b, c, row_sign, nullptr, 1);
    }
}

}  // namespace jsr
