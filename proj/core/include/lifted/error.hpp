#pragma once

#include <stdexcept>
#include <string>

namespace lifted {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LIFTED_DECLARE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

LIFTED_DECLARE_ERROR(DimensionError)
LIFTED_DECLARE_ERROR(DomainError)
LIFTED_DECLARE_ERROR(ConfigError)
LIFTED_DECLARE_ERROR(ParseError)
LIFTED_DECLARE_ERROR(NonFiniteMoment)
LIFTED_DECLARE_ERROR(MissingConditionalMoments)
LIFTED_DECLARE_ERROR(DegenerateLink)
LIFTED_DECLARE_ERROR(AsymmetricInput)
LIFTED_DECLARE_ERROR(EigenFailure)
LIFTED_DECLARE_ERROR(NoConvergence)
LIFTED_DECLARE_ERROR(ZeroMatrix)
LIFTED_DECLARE_ERROR(UnsupportedCone)
LIFTED_DECLARE_ERROR(EmptyCone)
LIFTED_DECLARE_ERROR(InsufficientData)

#undef LIFTED_DECLARE_ERROR

}  // namespace lifted
