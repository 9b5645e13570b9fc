#pragma once

#include <stdexcept>
#include <string>

namespace gridfactor {

/// A configured size cap was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters outside the range where an object is defined (e.g. a grid that
/// would not be a simple graph).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A code matrix, cached file or structural check failed.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChecksumError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace gridfactor
