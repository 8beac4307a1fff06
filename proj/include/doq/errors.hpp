#pragma once

#include <stdexcept>
#include <string>

namespace doq {

// Input/precondition violations. The CLI maps these to exit code 1.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A series that cannot support the requested estimator (e.g. constant prices).
struct degenerate_input : domain_error {
    using domain_error::domain_error;
};

// eps does not satisfy the Novikov admissibility bound eps > delta(H)*T.
struct admissibility_error : domain_error {
    using domain_error::domain_error;
};

// Numerical failures discovered mid-computation. CLI exit code 2.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_positive_definite : numeric_error {
    using numeric_error::numeric_error;
};

struct grid_too_coarse : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace doq
