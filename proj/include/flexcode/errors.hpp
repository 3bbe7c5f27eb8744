// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace flexcode {

/// Arithmetic on elements of different fields, or a bad field descriptor.
class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Singular or inconsistent linear system. In a decoder this means the
/// surviving symbols do not determine the information.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProfileErrorKind {
    Empty,
    Range,
    ProductMismatch,
    NonMonotoneK,
    NonMonotoneEll,
    FinalLayerMismatch,
    ThresholdMismatch,
    Divisibility,
    Unsupported,
};

const char* to_string(ProfileErrorKind kind);

class ProfileError : public std::invalid_argument {
public:
    ProfileError(ProfileErrorKind kind, const std::string& what)
        : std::invalid_argument(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ProfileErrorKind kind() const noexcept { return kind_; }

private:
    ProfileErrorKind kind_;
};

/// Not enough surviving symbols, or the inner decode of a row failed.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shard file could not be read, written or validated.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace flexcode
