#ifndef GLRT_ERRORS_HPP
#define GLRT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace glrt {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gamma function evaluated at a non-positive integer.
struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// An iterative method exhausted its budget before reaching tolerance.
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

// The pole-separation inequalities of a Mellin-Barnes kernel admit no contour.
struct InfeasibleContour : Error {
    explicit InfeasibleContour(const std::string& msg) : Error(msg) {}
};

// A nominally real contour-integral result came back with a large imaginary part.
struct ImaginaryResidue : Error {
    explicit ImaginaryResidue(const std::string& msg) : Error(msg) {}
};

// Sample path on which a statistic is undefined (zero residual variance etc).
struct DegenerateSample : Error {
    explicit DegenerateSample(const std::string& msg) : Error(msg) {}
};

// Interpolation target not bracketed by the supplied curve.
struct BracketError : Error {
    explicit BracketError(const std::string& msg) : Error(msg) {}
};

// Too few Monte-Carlo trials for the requested quantile to be stable.
struct InsufficientTrials : Error {
    explicit InsufficientTrials(const std::string& msg) : Error(msg) {}
};

} // namespace glrt

#endif
