#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace jsr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Input that cannot be parsed or fails validation (CLI exit 2).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: eigen solver non-convergence, LP pivot failure, ... (CLI exit 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Case (C): complex leading eigenvalue of the candidate, out of scope (CLI exit 4).
struct UnsupportedCaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Work budget exceeded (brute force over too many words etc.).
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Certified interval [lower, upper] for the JSR, with a note on how each
// endpoint was produced.
struct JsrBounds {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool exact = false;  // lower == upper certified
    std::string lower_evidence;
    std::string upper_evidence;
};

}  // namespace jsr
