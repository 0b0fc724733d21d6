#pragma once

#include <stdexcept>
#include <string>

namespace rrt {

// Error taxonomy used across the library. Plain std::invalid_argument is used
// for precondition violations; the types below mark the remaining contract
// failures so callers can distinguish them.

struct InvalidState : std::logic_error {
    using std::logic_error::logic_error;
};

// Raised when an exact-enumeration cap (chain count, flip-mask width) would be
// exceeded rather than silently truncating.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by conditional samplers when the conditioning event is impossible or
// the rejection budget is exhausted.
struct UnsatisfiableCondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by exact conditional laws when the condition has zero probability.
struct EmptyCondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rrt
