#pragma once

#include <stdexcept>
#include <string>

namespace ssr {

/** Base class for all engine errors. */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct CompositionNonzero : Error { using Error::Error; };
struct NonTerminating : Error { using Error::Error; };
struct InfiniteFiber : Error { using Error::Error; };
struct TargetOutsideBasis : Error { using Error::Error; };
struct InvalidLabel : Error { using Error::Error; };
struct DuplicateLabel : Error { using Error::Error; };
struct CutoffTooLarge : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct NonStabilized : Error { using Error::Error; };
struct SchemaMismatch : Error { using Error::Error; };

}  // namespace ssr
