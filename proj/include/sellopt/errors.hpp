#pragma once

#include <stdexcept>
#include <string>

namespace sellopt {

/// Base of every error raised by the library. The derived type names the
/// failed precondition so callers can branch on it.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SELLOPT_DEFINE_ERROR(name)          \
  class name : public error {               \
   public:                                  \
    explicit name(const std::string& what)  \
        : error(std::string(#name ": ") + what) {} \
  };

SELLOPT_DEFINE_ERROR(DomainError)
SELLOPT_DEFINE_ERROR(TailNotIntegrable)
SELLOPT_DEFINE_ERROR(SecondMomentInfinite)
SELLOPT_DEFINE_ERROR(MomentInfinite)
SELLOPT_DEFINE_ERROR(MgfInfinite)
SELLOPT_DEFINE_ERROR(StepUnderflow)
SELLOPT_DEFINE_ERROR(PrecisionLoss)
SELLOPT_DEFINE_ERROR(NotIncreasing)
SELLOPT_DEFINE_ERROR(NotConcave)
SELLOPT_DEFINE_ERROR(RateTooSmall)
SELLOPT_DEFINE_ERROR(NoDensity)
SELLOPT_DEFINE_ERROR(UnknownTail)
SELLOPT_DEFINE_ERROR(NotApplicable)
SELLOPT_DEFINE_ERROR(NonPositiveValue)
SELLOPT_DEFINE_ERROR(EmptyBatch)
SELLOPT_DEFINE_ERROR(TooFewSamples)
SELLOPT_DEFINE_ERROR(UnknownFigure)
SELLOPT_DEFINE_ERROR(ParseError)

#undef SELLOPT_DEFINE_ERROR

}  // namespace sellopt
