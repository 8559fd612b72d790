#ifndef NOVARCH_ERROR_HPP
#define NOVARCH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace novarch {

// Invalid configuration: bad field values, malformed config files, bad flags.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Genotype violates its length or range invariants.
struct encoding_error : std::runtime_error {
    explicit encoding_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation requested on an unsupported space, or operands from mismatched spaces.
struct space_error : std::runtime_error {
    explicit space_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Benchmark/data failures: parse errors, unknown keys, missing lookups.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Selection preconditions violated: pool too small for tournament/survival.
struct selection_error : std::runtime_error {
    explicit selection_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace novarch

#endif
