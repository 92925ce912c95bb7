#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// A precondition of a library call was violated by the caller.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Physical parameters outside their admissible range.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The conditioned state vanishes (zero normalization), or a limit that
/// needs a positive photon number / Fisher information got zero.
struct DegenerateState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fock truncation too small for the requested accuracy.
struct CutoffInadequate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoFeasiblePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace su11
