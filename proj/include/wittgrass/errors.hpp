#pragma once

#include <stdexcept>
#include <string>

namespace wittgrass {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WITTGRASS_DEFINE_ERROR(Name)            \
  class Name : public Error {                   \
   public:                                      \
    explicit Name(const std::string& what)      \
        : Error(std::string(#Name ": ") + what) {} \
  };

// Operand shape errors.
WITTGRASS_DEFINE_ERROR(LengthMismatch)
WITTGRASS_DEFINE_ERROR(InvalidArgument)
WITTGRASS_DEFINE_ERROR(ParseError)

// Algebraic preconditions.
WITTGRASS_DEFINE_ERROR(NonUnit)
WITTGRASS_DEFINE_ERROR(NotPerfect)
WITTGRASS_DEFINE_ERROR(NotDominant)
WITTGRASS_DEFINE_ERROR(NotStable)
WITTGRASS_DEFINE_ERROR(DetValuationMismatch)

// Precision model.
WITTGRASS_DEFINE_ERROR(PrecisionLoss)
WITTGRASS_DEFINE_ERROR(ZeroAtPrecision)
WITTGRASS_DEFINE_ERROR(WindowTooSmall)

// Resource limits.
WITTGRASS_DEFINE_ERROR(LimitError)
WITTGRASS_DEFINE_ERROR(SizeGuard)
WITTGRASS_DEFINE_ERROR(ResourceGuard)
WITTGRASS_DEFINE_ERROR(SaturationGuard)

// Table cache I/O.
WITTGRASS_DEFINE_ERROR(CacheError)

#undef WITTGRASS_DEFINE_ERROR

}  // namespace wittgrass
