#pragma once

#include <stdexcept>
#include <string>

namespace fracwdw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleError : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct CancellationError : Error { using Error::Error; };
struct RootBracketError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct DifferentiationError : Error { using Error::Error; };
struct SingularModeError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
// No mode survived; nothing can be synthesised.
struct NumericalFailure : Error { using Error::Error; };

}  // namespace fracwdw
