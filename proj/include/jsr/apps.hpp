#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jsr/common.hpp"
#include "jsr/matrixset.hpp"
#include "jsr/polytope.hpp"

namespace jsr {

// exact fraction num/den used so rational masks restrict bit-for-bit
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

enum class DiffSymbol { Zero, Plus, Minus, PM };  // o + - p

struct DifferencePattern {
    std::vector<DiffSymbol> symbols;

    static DifferencePattern parse(const std::string& text);  // over {o,+,-,p}
    int length() const { return static_cast<int>(symbols.size()); }
};

struct SubdivisionScheme {
    std::vector<double> mask;                       // a(support_start)..a(support_start+len-1)
    std::optional<std::vector<Rational>> mask_exact;  // same support, exact path
    long long support_start = 0;
    long long dilation = 2;                         // |m| >= 2
    std::vector<long long> digits;                  // |digits| = |m|; default from m

    static std::vector<long long> default_digits(long long m);  // m>0: 0..m-1; m<0: m+1..0
    double mask_sum() const;
};

struct TransitionResult {
    MatrixSet set;                  // restricted transition matrices T_d|V
    std::vector<long long> omega;   // index window
    Matrix basis;                   // |omega| x (|omega|-order) difference basis
    bool degenerate = false;        // empty difference space: JSR 0, alpha = +inf
};

// Omega closure, T_d[alpha,beta] = a(M*alpha + d - beta), restriction to the
// order-k difference subspace.
TransitionResult transition_matrices(const SubdivisionScheme& scheme, int order);

struct RegularityResult {
    double alpha_lower = 0.0;   // from the JSR upper bound
    double alpha_upper = 0.0;   // from the JSR lower bound (+inf when JSR = 0)
    bool exact = false;
    JsrBounds jsr;
    MatrixSet matrices;
    std::vector<long long> omega;
};

RegularityResult regularity(const SubdivisionScheme& scheme, int order,
                            const EngineOptions& opt = {});

// 2n-tap minimum-phase orthonormal Daubechies mask, sum = 2; 2 <= n <= 8.
SubdivisionScheme daubechies_scheme(int n);

// [MOS01]-style transfer matrices: one 0/1 matrix per maximal independent set
// of the (state, bit) conflict graph, deduplicated, dominated matrices dropped.
MatrixSet capacity_matrices(const std::vector<DifferencePattern>& patterns);

struct CapacityResult {
    double lower = 0.0, upper = 0.0;  // cap = log2(JSR), endpoint-wise
    bool exact = false;
    JsrBounds jsr;
    MatrixSet matrices;
};

CapacityResult capacity(const std::vector<DifferencePattern>& patterns,
                        const EngineOptions& opt = {});

// Named worked-example fixtures: X119, C15/C30/C60 (or Cn), ex_rho0, ex_rho,
// E (balancing pair), subdiv-example (the three restricted matrices).
MatrixSet fixture(const std::string& name);
std::vector<std::string> fixture_names();

// the paper's example mask (1/12)[3 3 4 3 3 4 3 3 4 3 3], dilation -3
SubdivisionScheme example_scheme();

}  // namespace jsr
