#pragma once

#include <stdexcept>
#include <string>

namespace superbethe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A rational function was evaluated at one of its poles (non-generic parameters).
struct PoleError : Error {
    using Error::Error;
};

struct SizeMismatch : Error {
    using Error::Error;
};

struct ExhaustionError : Error {
    using Error::Error;
};

/// T_ii(u) applied to the vacuum did not return a multiple of the vacuum.
struct NotAnEigenvector : Error {
    using Error::Error;
};

struct ZeroWeight : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace superbethe
