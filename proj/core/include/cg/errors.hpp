#pragma once

#include <stdexcept>
#include <string>

namespace cg {

// Bad parameters or configuration. The CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to converge. The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cg
