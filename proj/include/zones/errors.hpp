#pragma once

#include <stdexcept>
#include <string>

namespace zones {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data: catalog rows, duplicate identifiers, invalid configs.
struct DataError : Error {
    using Error::Error;
};

enum class LoadErrorKind {
    version_mismatch,
    malformed_header,
    malformed_row,
    truncated_body,
};

// Index file could not be read back.
struct LoadError : Error {
    LoadError(LoadErrorKind k, const std::string& msg) : Error(msg), kind_(k) {}
    LoadErrorKind kind() const { return kind_; }

private:
    LoadErrorKind kind_;
};

}  // namespace zones
