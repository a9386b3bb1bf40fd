#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mckba {

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when an exhaustive oracle is asked for a word size it cannot enumerate.
struct TractabilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The observation cannot come from any x. In attack context this means the
// ciphertexts were paired incorrectly or corrupted.
struct InconsistencyError : std::runtime_error {
    explicit InconsistencyError(const std::string& what, std::optional<std::size_t> block = std::nullopt)
        : std::runtime_error(block ? what + " (block " + std::to_string(*block) + ")" : what), block_index(block) {}
    std::optional<std::size_t> block_index;
};

struct MergeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cannot happen with exact data; signals a bug or tampered input.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

struct CoverageError : std::runtime_error {
    CoverageError(const std::string& what, int key_class)
        : std::runtime_error(what), key_class(key_class) {}
    int key_class;
};

}  // namespace mckba
