#pragma once

#include <stdexcept>
#include <string>

namespace burgers_rg {

/// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
    invalid_argument,  // bad parameters or malformed configuration
    hypothesis,        // zero-mass / oddness / Dirichlet condition violated
    truncation,        // the finite domain or frequency window is not sound
    solver,            // time marching or Picard iteration failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::solver: return "solver";
    }
    return "unknown";
}

} // namespace burgers_rg
