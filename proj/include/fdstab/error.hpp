#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stencil or window reached outside the stored grid.
class IndexError : public Error {
public:
    IndexError(std::ptrdiff_t missing, std::ptrdiff_t j_min, std::ptrdiff_t j_max)
        : Error("grid index " + std::to_string(missing) + " is outside [" + std::to_string(j_min) +
                ", " + std::to_string(j_max) + "]"),
          missing_(missing) {}

    std::ptrdiff_t missing_index() const noexcept { return missing_; }

private:
    std::ptrdiff_t missing_;
};

/// Invalid argument combination (unsupported pairing, bad parameter, too few points).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A value became NaN or infinite.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Raised when an algebraic step that must succeed does not; indicates a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace fdstab
