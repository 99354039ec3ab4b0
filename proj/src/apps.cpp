#include "jsr/apps.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>

namespace jsr {

// ---------------------------------------------------------------- Rational

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw ParseError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }

// ------------------------------------------------------------- patterns

DifferencePattern DifferencePattern::parse(const std::string& text) {
    DifferencePattern p;
    for (char ch : text) {
        switch (ch) {
            case 'o': p.symbols.push_back(DiffSymbol::Zero); break;
            case '+': p.symbols.push_back(DiffSymbol::Plus); break;
            case '-': p.symbols.push_back(DiffSymbol::Minus); break;
            case 'p': p.symbols.push_back(DiffSymbol::PM); break;
            default:
                throw ParseError(std::string("invalid pattern symbol '") + ch +
                                 "' (expected o, +, -, p)");
        }
    }
    if (p.symbols.empty()) throw ParseError("empty difference pattern");
    return p;
}

// ------------------------------------------------------------ subdivision

std::vector<long long> SubdivisionScheme::default_digits(long long m) {
    if (m >= 2)
        return [&] {
            std::vector<long long> d;
            for (long long i = 0; i < m; ++i) d.push_back(i);
            return d;
        }();
    if (m <= -2) {
        std::vector<long long> d;
        for (long long i = m + 1; i <= 0; ++i) d.push_back(i);
        return d;
    }
    throw ParseError("dilation must satisfy |m| >= 2");
}

double SubdivisionScheme::mask_sum() const {
    double s = 0.0;
    for (double x : mask) s += x;
    return s;
}

namespace {

std::vector<long long> omega_closure(long long m, const std::vector<long long>& digits,
                                     long long supp_start, long long supp_len) {
    std::set<long long> omega{0};
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<long long> snapshot(omega.begin(), omega.end());
        for (long long beta : snapshot)
            for (long long d : digits)
                for (long long s = supp_start; s < supp_start + supp_len; ++s) {
                    const long long val = beta - d + s;
                    if (val % m != 0) continue;
                    const long long alpha = val / m;
                    if (omega.insert(alpha).second) changed = true;
                }
        if (omega.size() > 100000)
            throw NumericalError("index window closure did not stay finite (bad digit set?)");
    }
    return {omega.begin(), omega.end()};
}

// Solves B X = T B by forward substitution against the banded binomial basis
// (B[c+k][c] = (-1)^k C(order,k)); exact for Rational, floating for double.
template <class Sc>
std::vector<std::vector<Sc>> restrict_to_differences(const std::vector<std::vector<Sc>>& t,
                                                     int order,
                                                     const std::vector<double>& binom,
                                                     bool& consistent, double norm_hint) {
    const int n = static_cast<int>(t.size());
    const int cols = n - order;
    // TB[i][c] = sum_k B[.][c]-weighted combination of T columns
    auto coeff = [&](int row, int col) -> double {
        const int k = row - col;
        if (k < 0 || k > order) return 0.0;
        return (k % 2 == 0 ? 1.0 : -1.0) * binom[static_cast<size_t>(k)];
    };
    std::vector<std::vector<Sc>> tb(static_cast<size_t>(n), std::vector<Sc>(static_cast<size_t>(cols)));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < cols; ++c) {
            Sc acc{};
            for (int k = 0; k <= order; ++k) {
                const double w = coeff(c + k, c);
                if (w == 1.0)
                    acc = acc + t[static_cast<size_t>(i)][static_cast<size_t>(c + k)];
                else if (w == -1.0)
                    acc = acc - t[static_cast<size_t>(i)][static_cast<size_t>(c + k)];
                else if (w != 0.0)
                    acc = acc + Sc(static_cast<long long>(w)) *
                                    t[static_cast<size_t>(i)][static_cast<size_t>(c + k)];
            }
            tb[static_cast<size_t>(i)][static_cast<size_t>(c)] = acc;
        }
    std::vector<std::vector<Sc>> x(static_cast<size_t>(cols),
                                   std::vector<Sc>(static_cast<size_t>(cols)));
    for (int i = 0; i < cols; ++i)
        for (int c = 0; c < cols; ++c) {
            Sc acc = tb[static_cast<size_t>(i)][static_cast<size_t>(c)];
            for (int k = 1; k <= order && i - k >= 0; ++k) {
                const double w = coeff(i, i - k);
                if (w == 1.0)
                    acc = acc - x[static_cast<size_t>(i - k)][static_cast<size_t>(c)];
                else if (w == -1.0)
                    acc = acc + x[static_cast<size_t>(i - k)][static_cast<size_t>(c)];
                else if (w != 0.0)
                    acc = acc - Sc(static_cast<long long>(w)) *
                                    x[static_cast<size_t>(i - k)][static_cast<size_t>(c)];
            }
            x[static_cast<size_t>(i)][static_cast<size_t>(c)] = acc;
        }
    // consistency of the remaining rows
    consistent = true;
    for (int i = cols; i < n; ++i)
        for (int c = 0; c < cols; ++c) {
            Sc acc{};
            for (int k = 0; k <= order; ++k) {
                const int row_col = i - k;
                if (row_col < 0 || row_col >= cols) continue;
                const double w = coeff(i, row_col);
                if (w == 1.0)
                    acc = acc + x[static_cast<size_t>(row_col)][static_cast<size_t>(c)];
                else if (w == -1.0)
                    acc = acc - x[static_cast<size_t>(row_col)][static_cast<size_t>(c)];
                else if (w != 0.0)
                    acc = acc + Sc(static_cast<long long>(w)) *
                                    x[static_cast<size_t>(row_col)][static_cast<size_t>(c)];
            }
            Sc diff = acc - tb[static_cast<size_t>(i)][static_cast<size_t>(c)];
            double mag;
            if constexpr (std::is_same_v<Sc, Rational>)
                mag = std::abs(diff.value());
            else
                mag = std::abs(diff);
            if (mag > 1e-8 * std::max(1.0, norm_hint)) consistent = false;
        }
    return x;
}

template <class Sc>
Sc mask_at(const std::vector<Sc>& mask, long long support_start, long long idx) {
    const long long off = idx - support_start;
    if (off < 0 || off >= static_cast<long long>(mask.size())) return Sc{};
    return mask[static_cast<size_t>(off)];
}

}  // namespace

TransitionResult transition_matrices(const SubdivisionScheme& scheme, int order) {
    if (order < 1) throw ParseError("difference order must be >= 1");
    if (std::llabs(scheme.dilation) < 2) throw ParseError("dilation must satisfy |m| >= 2");
    if (scheme.mask.empty()) throw ParseError("empty mask");
    std::vector<long long> digits =
        scheme.digits.empty() ? SubdivisionScheme::default_digits(scheme.dilation) : scheme.digits;
    if (static_cast<long long>(digits.size()) != std::llabs(scheme.dilation))
        throw ParseError("digit set size must equal |m|");

    TransitionResult out;
    out.omega = omega_closure(scheme.dilation, digits, scheme.support_start,
                              static_cast<long long>(scheme.mask.size()));
    const int n = static_cast<int>(out.omega.size());
    const int cols = n - order;

    std::vector<double> binom(static_cast<size_t>(order) + 1, 1.0);
    for (int k = 1; k <= order; ++k)
        binom[static_cast<size_t>(k)] =
            binom[static_cast<size_t>(k - 1)] * (order - k + 1) / static_cast<double>(k);

    out.basis = Matrix::Zero(n, std::max(cols, 0));
    for (int c = 0; c < cols; ++c)
        for (int k = 0; k <= order; ++k)
            out.basis(c + k, c) = (k % 2 == 0 ? 1.0 : -1.0) * binom[static_cast<size_t>(k)];

    if (cols < 1) {
        out.degenerate = true;
        out.set = MatrixSet(std::vector<Matrix>(digits.size(), Matrix::Zero(1, 1)));
        return out;
    }

    std::vector<Matrix> restricted;
    double norm_hint = 0.0;
    for (double v : scheme.mask) norm_hint = std::max(norm_hint, std::abs(v));
    for (long long d : digits) {
        bool consistent = true;
        Matrix xm(cols, cols);
        if (scheme.mask_exact) {
            std::vector<std::vector<Rational>> t(
                static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    t[static_cast<size_t>(i)][static_cast<size_t>(j)] = mask_at(
                        *scheme.mask_exact, scheme.support_start,
                        scheme.dilation * out.omega[static_cast<size_t>(i)] + d -
                            out.omega[static_cast<size_t>(j)]);
            auto x = restrict_to_differences<Rational>(t, order, binom, consistent, norm_hint);
            for (int i = 0; i < cols; ++i)
                for (int j = 0; j < cols; ++j)
                    xm(i, j) = x[static_cast<size_t>(i)][static_cast<size_t>(j)].value();
        } else {
            std::vector<std::vector<double>> t(static_cast<size_t>(n),
                                               std::vector<double>(static_cast<size_t>(n), 0.0));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    t[static_cast<size_t>(i)][static_cast<size_t>(j)] = mask_at(
                        scheme.mask, scheme.support_start,
                        scheme.dilation * out.omega[static_cast<size_t>(i)] + d -
                            out.omega[static_cast<size_t>(j)]);
            auto x = restrict_to_differences<double>(t, order, binom, consistent, norm_hint);
            for (int i = 0; i < cols; ++i)
                for (int j = 0; j < cols; ++j)
                    xm(i, j) = x[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        if (!consistent)
            throw NumericalError(
                "transition matrices do not leave the order-" + std::to_string(order) +
                " difference subspace invariant (order too high for this mask?)");
        restricted.push_back(std::move(xm));
    }
    out.set = MatrixSet(std::move(restricted));
    return out;
}

RegularityResult regularity(const SubdivisionScheme& scheme, int order, const EngineOptions& opt) {
    RegularityResult res;
    TransitionResult tr = transition_matrices(scheme, order);
    res.matrices = tr.set;
    res.omega = tr.omega;
    const double logm = std::log(static_cast<double>(std::llabs(scheme.dilation)));

    bool all_zero = true;
    for (const auto& m : tr.set.matrices) all_zero &= (m.lpNorm<Eigen::Infinity>() == 0.0);
    if (tr.degenerate || all_zero) {
        res.jsr.lower = res.jsr.upper = 0.0;
        res.jsr.exact = true;
        res.alpha_lower = res.alpha_upper = std::numeric_limits<double>::infinity();
        res.exact = true;
        return res;
    }
    EngineResult er = compute_jsr(tr.set, opt);
    res.jsr = er.bounds;
    res.exact = er.bounds.exact;
    res.alpha_lower = -std::log(res.jsr.upper) / logm;
    res.alpha_upper = res.jsr.lower > 0.0 ? -std::log(res.jsr.lower) / logm
                                          : std::numeric_limits<double>::infinity();
    return res;
}

SubdivisionScheme daubechies_scheme(int n) {
    if (n < 2 || n > 8) throw ParseError("Daubechies order must satisfy 2 <= n <= 8");
    using C = std::complex<double>;
    // roots of P(y) = sum_{k<n} C(n-1+k, k) y^k via the companion matrix
    std::vector<double> pc(static_cast<size_t>(n));
    pc[0] = 1.0;
    for (int k = 1; k < n; ++k)
        pc[static_cast<size_t>(k)] =
            pc[static_cast<size_t>(k - 1)] * (n - 1 + k) / static_cast<double>(k);
    const int deg = n - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        comp(i, deg - 1) = -pc[static_cast<size_t>(i)] / pc[static_cast<size_t>(deg)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    if (es.info() != Eigen::Success) throw NumericalError("Daubechies root finding failed");

    std::vector<C> zroots;
    for (int i = 0; i < deg; ++i) {
        const C y = es.eigenvalues()(i);
        const C b = 4.0 * y - 2.0;
        const C disc = std::sqrt(b * b - 4.0);
        const C z1 = (-b + disc) / 2.0, z2 = (-b - disc) / 2.0;
        zroots.push_back(std::abs(z1) <= std::abs(z2) ? z1 : z2);  // minimum phase
    }
    std::vector<C> poly{1.0};
    auto convolve = [](const std::vector<C>& p, const C& r0, const C& r1) {
        std::vector<C> q(p.size() + 1, C(0.0));
        for (size_t i = 0; i < p.size(); ++i) {
            q[i] += p[i] * r0;
            q[i + 1] += p[i] * r1;
        }
        return q;
    };
    for (const C& z : zroots) poly = convolve(poly, C(1.0), -z);
    for (int i = 0; i < n; ++i) poly = convolve(poly, C(0.5), C(0.5));

    SubdivisionScheme sch;
    sch.dilation = 2;
    sch.digits = {0, 1};
    sch.support_start = 0;
    double sum = 0.0;
    for (const C& c : poly) sum += c.real();
    for (const C& c : poly) sch.mask.push_back(c.real() * 2.0 / sum);
    return sch;
}

// -------------------------------------------------------------- capacity

namespace {

std::set<std::vector<int>> expand_patterns(const std::vector<DifferencePattern>& patterns) {
    std::set<std::vector<int>> out;
    for (const auto& p : patterns) {
        std::vector<std::vector<int>> branches{{}};
        for (DiffSymbol s : p.symbols) {
            std::vector<int> opts;
            switch (s) {
                case DiffSymbol::Zero: opts = {0}; break;
                case DiffSymbol::Plus: opts = {1}; break;
                case DiffSymbol::Minus: opts = {-1}; break;
                case DiffSymbol::PM: opts = {1, -1}; break;
            }
            std::vector<std::vector<int>> next;
            for (const auto& b : branches)
                for (int o : opts) {
                    auto c = b;
                    c.push_back(o);
                    next.push_back(std::move(c));
                }
            branches = std::move(next);
        }
        for (auto& b : branches) out.insert(std::move(b));
    }
    return out;
}

void bron_kerbosch(std::uint64_t r, std::uint64_t p, std::uint64_t x,
                   const std::vector<std::uint64_t>& compat, std::vector<std::uint64_t>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    std::uint64_t iter = p;
    while (iter) {
        const int v = std::countr_zero(iter);
        iter &= iter - 1;
        const std::uint64_t bit = 1ull << v;
        bron_kerbosch(r | bit, p & compat[static_cast<size_t>(v)],
                      x & compat[static_cast<size_t>(v)], compat, out);
        p &= ~bit;
        x |= bit;
    }
}

}  // namespace

MatrixSet capacity_matrices(const std::vector<DifferencePattern>& patterns) {
    if (patterns.empty()) throw ParseError("capacity needs at least one pattern");
    const int m = patterns.front().length();
    for (const auto& p : patterns)
        if (p.length() != m) throw ParseError("all patterns must have equal length");
    if (m < 2) throw ParseError("patterns must have length >= 2");
    if (m > 6) throw BudgetError("pattern length > 6 exceeds the desk-scale budget");

    const auto forbidden = expand_patterns(patterns);
    if (forbidden.count(std::vector<int>(static_cast<size_t>(m), 0)))
        throw ParseError("the all-zero difference pattern forbids nothing representable");

    const int wbits = m - 1;
    const int n_states = 1 << wbits;
    const int n_nodes = n_states * 2;  // (window, next bit)

    auto window_bit = [&](int state, int pos) { return (state >> (wbits - 1 - pos)) & 1; };
    auto conflicting = [&](int su, int bu, int sv, int bv) {
        std::vector<int> diff(static_cast<size_t>(m));
        for (int i = 0; i < wbits; ++i) diff[static_cast<size_t>(i)] = window_bit(su, i) - window_bit(sv, i);
        diff[static_cast<size_t>(wbits)] = bu - bv;
        if (forbidden.count(diff)) return true;
        for (auto& d : diff) d = -d;
        return forbidden.count(diff) > 0;
    };

    std::vector<std::uint64_t> compat(static_cast<size_t>(n_nodes), 0);
    for (int i = 0; i < n_nodes; ++i)
        for (int j = 0; j < n_nodes; ++j) {
            if (i == j) continue;
            if (!conflicting(i >> 1, i & 1, j >> 1, j & 1))
                compat[static_cast<size_t>(i)] |= 1ull << j;
        }

    std::vector<std::uint64_t> mis;
    const std::uint64_t all =
        n_nodes == 64 ? ~0ull : ((1ull << n_nodes) - 1);
    bron_kerbosch(0, all, 0, compat, mis);

    std::set<std::vector<std::int8_t>> seen;
    std::vector<Matrix> mats;
    for (std::uint64_t set_bits : mis) {
        Matrix a = Matrix::Zero(n_states, n_states);
        std::uint64_t it = set_bits;
        while (it) {
            const int node = std::countr_zero(it);
            it &= it - 1;
            const int state = node >> 1, bit = node & 1;
            const int succ = ((state << 1) | bit) & (n_states - 1);
            a(succ, state) = 1.0;
        }
        std::vector<std::int8_t> key;
        key.reserve(static_cast<size_t>(n_states * n_states));
        for (int i = 0; i < n_states; ++i)
            for (int j = 0; j < n_states; ++j) key.push_back(static_cast<std::int8_t>(a(i, j)));
        if (seen.insert(key).second) mats.push_back(std::move(a));
    }
    // drop entrywise-dominated matrices
    std::vector<Matrix> kept;
    for (size_t i = 0; i < mats.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < mats.size() && !dominated; ++j) {
            if (i == j) continue;
            const bool geq = (mats[j].array() >= mats[i].array()).all();
            const bool gt = (mats[j].array() > mats[i].array()).any();
            dominated = geq && gt;
        }
        if (!dominated) kept.push_back(mats[i]);
    }
    std::sort(kept.begin(), kept.end(), [&](const Matrix& a, const Matrix& b) {
        for (int i = 0; i < n_states; ++i)
            for (int j = 0; j < n_states; ++j)
                if (a(i, j) != b(i, j)) return a(i, j) > b(i, j);
        return false;
    });
    return MatrixSet(std::move(kept));
}

CapacityResult capacity(const std::vector<DifferencePattern>& patterns, const EngineOptions& opt) {
    CapacityResult res;
    res.matrices = capacity_matrices(patterns);
    EngineResult er = compute_jsr(res.matrices, opt);
    res.jsr = er.bounds;
    res.exact = er.bounds.exact;
    res.lower = std::log2(er.bounds.lower);
    res.upper = std::log2(er.bounds.upper);
    return res;
}

// -------------------------------------------------------------- fixtures

SubdivisionScheme example_scheme() {
    SubdivisionScheme s;
    s.dilation = -3;
    s.support_start = 0;
    std::vector<int> num{3, 3, 4, 3, 3, 4, 3, 3, 4, 3, 3};
    std::vector<Rational> exact;
    for (int v : num) {
        s.mask.push_back(static_cast<double>(v) / 12.0);
        exact.emplace_back(v, 12);
    }
    s.mask_exact = std::move(exact);
    s.digits = SubdivisionScheme::default_digits(-3);
    return s;
}

std::vector<std::string> fixture_names() {
    return {"X119", "C15", "C30", "C60", "ex_rho0", "ex_rho", "E", "subdiv-example"};
}

MatrixSet fixture(const std::string& name) {
    auto m2 = [](double a, double b, double c, double d) {
        Matrix m(2, 2);
        m << a, b, c, d;
        return m;
    };
    if (name == "X119") {
        return MatrixSet({m2(15.0 / 92, -73.0 / 79, 56.0 / 59, 89.0 / 118),
                          m2(-231.0 / 241, -143.0 / 219, 103.0 / 153, -38.0 / 65)});
    }
    if (name.size() > 1 && name[0] == 'C') {
        int n = 0;
        try {
            n = std::stoi(name.substr(1));
        } catch (...) {
            throw ParseError("unknown fixture: " + name);
        }
        if (n < 1) throw ParseError("C_n fixture needs n >= 1");
        const double c = std::exp(1.0 + 1.0 / n) / n;
        return MatrixSet({m2(1, 1, 0, 1), m2(0, 0, c, 0)});
    }
    if (name == "ex_rho0") {
        return MatrixSet({m2(2, 0, 0, 2), m2(0, 2, 0, 0), m2(0, 0, 2, 0)});
    }
    if (name == "ex_rho") {
        return MatrixSet({m2(1, 1, 0, 1), m2(1, 0, 1, 1), m2(0.75, 0.75, 0, 0.75),
                          m2(0.75, 0, 0.75, 0.75)});
    }
    if (name == "E") {
        return MatrixSet({m2(2, 1, -1, 2), m2(2, 0, 2, 1)});
    }
    if (name == "subdiv-example") {
        return transition_matrices(example_scheme(), 1).set;
    }
    throw ParseError("unknown fixture: " + name);
}

}  // namespace jsr
