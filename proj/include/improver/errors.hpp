#pragma once

#include <stdexcept>
#include <string>

namespace improver {

// Error taxonomy maps onto CLI exit codes: config = 2, data = 3, backend = 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; message carries line number and field path.
struct ParseError : DataError {
    explicit ParseError(const std::string& msg) : DataError(msg) {}
};

struct BackendError : std::runtime_error {
    explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace improver
