#pragma once

#include <stdexcept>
#include <string>

namespace curator {

// Bad configuration (unknown stage, dependency-order violation, invalid
// parameter block). CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data (malformed corpus line, duplicate doc_id, missing file).
// CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace curator
