#pragma once

#include <stdexcept>
#include <string>

namespace majoloop {

// Invalid geometry / weight / campaign configuration. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument to an operation (bad closure policy, overlapping
// regions, out-of-domain parameter, ...).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Runtime failure (I/O, non-convergence surfaced as error). CLI exit code 3.
struct RuntimeFailure : std::runtime_error {
    explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace majoloop
