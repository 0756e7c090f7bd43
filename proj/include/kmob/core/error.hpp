#pragma once

#include <stdexcept>

namespace kmob {

/// Malformed or inconsistent input: dimension mismatch, invalid parameters,
/// unreadable files, locality violations.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured size budget (DP table, work-function table) would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The operation is not defined for this input, e.g. double coverage off the line.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A collaborator broke its contract, e.g. a k-server guide left the request uncovered.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kmob
