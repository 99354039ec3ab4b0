#include "jsr/matrixset.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace jsr {

std::string ProductWord::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < indices.size(); ++i) {
        if (i) os << ' ';
        os << indices[i];
    }
    return os.str();
}

MatrixSet::MatrixSet(std::vector<Matrix> mats, double sc) : matrices(std::move(mats)), scale(sc) {
    if (matrices.empty()) throw ParseError("matrix set must be nonempty");
    const auto s = matrices.front().rows();
    if (s == 0) throw ParseError("matrices must be nonempty");
    for (const auto& m : matrices)
        if (m.rows() != s || m.cols() != s) throw ParseError("matrices must be square and of equal size");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParseError("scale must be positive and finite");
}

const Matrix& MatrixSet::at(int j) const {
    if (j < 1 || j > count()) throw ParseError("matrix index out of range: " + std::to_string(j));
    return matrices[static_cast<size_t>(j - 1)];
}

MatrixSet MatrixSet::scaled_by(double factor) const {
    MatrixSet out = *this;
    out.scale = scale * factor;
    return out;
}

Matrix evaluate(const MatrixSet& set, const ProductWord& word) {
    const int s = set.dim();
    Matrix p = Matrix::Identity(s, s);
    for (int j : word.indices) p = set.at(j) * p;
    const double sc = std::pow(set.scale, static_cast<double>(word.length()));
    return sc == 1.0 ? p : Matrix(sc * p);
}

double spectral_radius(const Matrix& m) {
    if (m.rows() == 1) return std::abs(m(0, 0));
    Eigen::RealSchur<Matrix> schur(m);
    if (schur.info() != Eigen::Success) throw NumericalError("real Schur iteration failed to converge");
    const Matrix& t = schur.matrixT();
    const auto s = m.rows();
    double r = 0.0;
    for (Eigen::Index i = 0; i < s;) {
        if (i + 1 < s && t(i + 1, i) != 0.0) {
            // 2x2 block: complex pair, |lambda|^2 = det
            const double det = t(i, i) * t(i + 1, i + 1) - t(i, i + 1) * t(i + 1, i);
            r = std::max(r, std::sqrt(std::abs(det)));
            i += 2;
        } else {
            r = std::max(r, std::abs(t(i, i)));
            ++i;
        }
    }
    return r;
}

double operator_norm(const Matrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    return m.jacobiSvd().singularValues()(0);
}

double normalized_spectral_radius(const MatrixSet& set, const ProductWord& word) {
    if (word.length() == 0) throw ParseError("empty word has no normalized spectral radius");
    MatrixSet unscaled = set;
    unscaled.scale = 1.0;
    const double rho = spectral_radius(evaluate(unscaled, word));
    return std::pow(rho, 1.0 / word.length());
}

EigenPair leading_eigenpair(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed to converge");
    const auto vals = es.eigenvalues();
    const auto s = m.rows();
    Eigen::Index lead = 0;
    for (Eigen::Index i = 1; i < s; ++i)
        if (std::abs(vals(i)) > std::abs(vals(lead))) lead = i;
    const double mod = std::abs(vals(lead));
    const double tol = 1e-10 * std::max(1.0, mod);

    EigenPair out;
    out.value = vals(lead).real();
    out.is_real = std::abs(vals(lead).imag()) <= tol;
    int mult = 0;
    for (Eigen::Index i = 0; i < s; ++i)
        if (std::abs(vals(i)) >= mod - tol) ++mult;
    out.is_simple = (mult == 1);

    Eigen::VectorXcd vc = es.eigenvectors().col(lead);
    Vector v;
    if (out.is_real) {
        // phase-align so the eigenvector is real
        Eigen::Index big = 0;
        vc.cwiseAbs().maxCoeff(&big);
        vc *= std::conj(vc(big)) / std::abs(vc(big));
        v = vc.real();
    } else {
        v = vc.real().norm() >= vc.imag().norm() ? Vector(vc.real()) : Vector(vc.imag());
    }
    v.normalize();
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v(big) < 0) v = -v;
    out.vector = v;
    return out;
}

Vector dual_leading_eigenvector(const Matrix& m, const Vector& right) {
    EigenPair left = leading_eigenpair(m.transpose());
    if (!left.is_real || !left.is_simple)
        throw NumericalError("dual eigenvector requires a real simple leading eigenvalue");
    Vector v = left.vector;
    const double ip = v.dot(right);
    if (std::abs(ip) < 1e-14)
        throw NumericalError("left/right leading eigenvectors are numerically orthogonal");
    return v / ip;
}

ProductWord canonicalize_word(const ProductWord& word) {
    const auto& w = word.indices;
    const int n = static_cast<int>(w.size());
    if (n == 0) return word;
    // smallest period p with w = (w_1..w_p)^{n/p}
    int period = n;
    for (int p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (int i = p; i < n && ok; ++i) ok = (w[i] == w[i - p]);
        if (ok) {
            period = p;
            break;
        }
    }
    std::vector<int> root(w.begin(), w.begin() + period);
    std::vector<int> best = root;
    std::vector<int> rot = root;
    for (int k = 1; k < period; ++k) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    ProductWord out;
    out.indices = std::move(best);
    return out;
}

}  // namespace jsr
