#pragma once

#include <stdexcept>
#include <string>

namespace sgw {

/// Base of every library failure. `name()` is the stable identifier the CLI
/// prints next to exit status 2.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define SGW_DEFINE_ERROR(Type)                                        \
  class Type : public Error {                                         \
   public:                                                            \
    explicit Type(const std::string& what) : Error(#Type, what) {}    \
  };

SGW_DEFINE_ERROR(InvalidParameter)
SGW_DEFINE_ERROR(GammaZero)
SGW_DEFINE_ERROR(DegenerateQuadratic)
SGW_DEFINE_ERROR(NotPositiveDefinite)
SGW_DEFINE_ERROR(StepTooLarge)
SGW_DEFINE_ERROR(CflViolation)
SGW_DEFINE_ERROR(NonFiniteField)
SGW_DEFINE_ERROR(PhaseUnderResolved)
SGW_DEFINE_ERROR(BoundaryLeak)
SGW_DEFINE_ERROR(BracketInvalid)
SGW_DEFINE_ERROR(InsufficientData)
SGW_DEFINE_ERROR(IoFailure)
SGW_DEFINE_ERROR(FormatError)

#undef SGW_DEFINE_ERROR

}  // namespace sgw
