#pragma once

#include <stdexcept>
#include <string>

namespace darboux {

/// Base of every error raised by the library. `kind()` is the stable
/// class name reported by the command-line front end.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define DARBOUX_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                          \
   public:                                                             \
    using Error::Error;                                                \
    const char* kind() const noexcept override { return #Name; }       \
  };

DARBOUX_DEFINE_ERROR(DomainError)
DARBOUX_DEFINE_ERROR(NonFiniteError)
DARBOUX_DEFINE_ERROR(EmptyMaskError)
DARBOUX_DEFINE_ERROR(GridError)
DARBOUX_DEFINE_ERROR(PathBlockedError)
DARBOUX_DEFINE_ERROR(CompatibilityError)
DARBOUX_DEFINE_ERROR(ZeroSeedError)
DARBOUX_DEFINE_ERROR(ZeroQError)
DARBOUX_DEFINE_ERROR(DegenerateError)
DARBOUX_DEFINE_ERROR(ZeroLaplacianError)
DARBOUX_DEFINE_ERROR(ParamError)
DARBOUX_DEFINE_ERROR(BranchError)
DARBOUX_DEFINE_ERROR(UnknownEntryError)
DARBOUX_DEFINE_ERROR(ParseError)

#undef DARBOUX_DEFINE_ERROR

}  // namespace darboux
