#pragma once

#include <stdexcept>
#include <string>

namespace subreg {

// Base class for everything the library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// raised when a predicate set would need more than the minterm index cap
struct CapExceededError : Error { using Error::Error; };
// raised when one truth-vector cell contains both members and non-members
struct CellConflictError : Error { using Error::Error; };

struct SamplerExhaustedError : Error { using Error::Error; };

struct DivergenceError : Error { using Error::Error; };
struct ZeroWeightsError : Error { using Error::Error; };

struct NoNegativePossibleError : Error { using Error::Error; };

}  // namespace subreg
