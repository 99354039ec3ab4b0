#include "jsr/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace jsr {
namespace {

struct TokenReader {
    std::istream& in;
    int line_no = 0;
    std::istringstream current;

    bool next_token(std::string& tok) {
        for (;;) {
            if (current >> tok) return true;
            std::string line;
            if (!std::getline(in, line)) return false;
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            current = std::istringstream(line);
        }
    }

    double number(const char* what) {
        std::string tok;
        if (!next_token(tok))
            throw ParseError(std::string("unexpected end of input while reading ") + what);
        return parse_value(tok);
    }

    double parse_value(const std::string& tok) {
        const auto slash = tok.find('/');
        try {
            if (slash != std::string::npos) {
                size_t p1 = 0, p2 = 0;
                const double num = std::stod(tok.substr(0, slash), &p1);
                const double den = std::stod(tok.substr(slash + 1), &p2);
                if (p1 != slash || p2 != tok.size() - slash - 1 || den == 0.0)
                    throw std::invalid_argument(tok);
                return num / den;
            }
            size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) + ": invalid number '" + tok + "'");
        }
    }
};

bool parse_rational_token(const std::string& tok, Rational& out) {
    const auto slash = tok.find('/');
    try {
        if (slash != std::string::npos) {
            size_t p1 = 0, p2 = 0;
            const long long num = std::stoll(tok.substr(0, slash), &p1);
            const long long den = std::stoll(tok.substr(slash + 1), &p2);
            if (p1 != slash || p2 != tok.size() - slash - 1 || den == 0) return false;
            out = Rational(num, den);
            return true;
        }
        size_t pos = 0;
        const long long num = std::stoll(tok, &pos);
        if (pos != tok.size()) return false;
        out = Rational(num, 1);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

MatrixSet parse_matrix_set(std::istream& in) {
    TokenReader rd{in};
    const double sd = rd.number("matrix dimension s");
    const double jd = rd.number("matrix count J");
    const int s = static_cast<int>(sd), j = static_cast<int>(jd);
    if (s < 1 || s != sd) throw ParseError("line " + std::to_string(rd.line_no) + ": bad dimension s");
    if (j < 1 || j != jd) throw ParseError("line " + std::to_string(rd.line_no) + ": bad count J");
    if (static_cast<long long>(s) * s * j > 200'000'000)
        throw ParseError("matrix set too large");
    std::vector<Matrix> mats;
    for (int k = 0; k < j; ++k) {
        Matrix m(s, s);
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c) m(r, c) = rd.number("matrix entry");
        mats.push_back(std::move(m));
    }
    std::string extra;
    if (rd.next_token(extra))
        throw ParseError("line " + std::to_string(rd.line_no) + ": trailing data '" + extra + "'");
    return MatrixSet(std::move(mats));
}

MatrixSet load_matrix_set(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open matrix file: " + path);
    return parse_matrix_set(f);
}

std::string format_matrix_set(const MatrixSet& set) {
    std::ostringstream os;
    os << set.dim() << ' ' << set.count() << '\n';
    for (const auto& m : set.matrices) {
        for (int r = 0; r < set.dim(); ++r) {
            for (int c = 0; c < set.dim(); ++c) {
                if (c) os << ' ';
                os << format_number(m(r, c));
            }
            os << '\n';
        }
    }
    return os.str();
}

SubdivisionScheme parse_mask(std::istream& in) {
    TokenReader rd{in};
    std::string tok;
    if (!rd.next_token(tok) || tok != "dilation")
        throw ParseError("mask file must start with a 'dilation m' header");
    const double md = rd.number("dilation");
    SubdivisionScheme sch;
    sch.dilation = static_cast<long long>(md);
    if (sch.dilation != md || std::llabs(sch.dilation) < 2)
        throw ParseError("dilation must be an integer with |m| >= 2");
    sch.digits = SubdivisionScheme::default_digits(sch.dilation);

    std::vector<Rational> exact;
    bool all_rational = true;
    while (rd.next_token(tok)) {
        sch.mask.push_back(rd.parse_value(tok));
        Rational r;
        if (all_rational && parse_rational_token(tok, r))
            exact.push_back(r);
        else
            all_rational = false;
    }
    if (sch.mask.empty()) throw ParseError("mask file has no coefficients");
    if (all_rational) sch.mask_exact = std::move(exact);
    return sch;
}

SubdivisionScheme load_mask(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open mask file: " + path);
    return parse_mask(f);
}

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

std::string format_interval(double lo, double hi) {
    return "[" + format_number(lo) + ", " + format_number(hi) + "]";
}

}  // namespace jsr
