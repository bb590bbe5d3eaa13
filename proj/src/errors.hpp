#ifndef CCHN_ERRORS_HPP
#define CCHN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cchn {

// Input failed schema or invariant validation.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Input text could not be parsed at all (malformed JSON, bad dump format).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A combinatorial guard tripped (instance too large for the requested mode).
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// The solver could not certify a result (iteration cap, numerical breakdown).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cchn

#endif
