#pragma once

#include <stdexcept>
#include <string>

namespace wdro {

// Error taxonomy mirrored by the CLI exit codes:
//   usage_error -> 1, data_error -> 2, internal_error -> 3.

// Bad invocation: unknown flags, malformed parameter strings.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: missing files, parse failures, bound violations, infeasible
// parameter combinations the caller could have avoided.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Should-not-happen conditions: solver pivot limits, broken invariants.
struct internal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wdro
