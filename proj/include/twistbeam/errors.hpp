#pragma once

#include <stdexcept>
#include <string>

namespace twistbeam {

/// Rejected input: bad parameters, malformed config, violated precondition.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: quadrature did not converge, step resolution too coarse,
/// non-finite state during integration.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Print a non-fatal diagnostic to stderr.
void warn(const std::string& message);

} // namespace twistbeam
