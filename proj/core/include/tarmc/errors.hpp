#pragma once

#include <stdexcept>
#include <string>

namespace tarmc {

// Error taxonomy used across the library.  The CLI maps these onto process
// exit codes: config_error -> 2, numeric_error -> 3, anything else -> 1.

// Invalid parameters, malformed input files, out-of-domain requests.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed request whose computation failed numerically (overflow,
// non-convergence, event-cap exhaustion, ...).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tarmc
