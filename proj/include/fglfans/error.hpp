#pragma once

#include <stdexcept>

namespace fglfans {

// Error categories map onto the CLI exit codes: input data (2),
// request/configuration (3), internal invariant violation (4).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fglfans
