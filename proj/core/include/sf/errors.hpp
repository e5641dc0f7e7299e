#pragma once

#include <stdexcept>
#include <string>

namespace sf {

/// Malformed or invalid input (parse errors, invariant violations in data
/// handed to the toolkit). CLI exit code 4.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The instance admits no feasible solution (demand across components, or no
/// conforming solution exists). CLI exit code 2.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A guarded resource limit was exceeded (brute-force size guards, sequence
/// enumeration caps). Never silent: the message names the limit. CLI exit 3.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sf
