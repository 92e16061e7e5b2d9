#pragma once

#include <stdexcept>
#include <string>

namespace awesom {

/// Invalid parameter or configuration value (bad lattice size, threshold out of range, ...).
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File contents do not follow the expected format (bad magic, truncated payload, NaN cell, ...).
class format_error : public io_error {
public:
    using io_error::io_error;
};

/// Feature dimensionality or array length disagreement between two inputs.
class dimension_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace awesom
