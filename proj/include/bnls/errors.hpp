// Exception taxonomy. Every guard that can abort a pipeline carries a stable
// name so the CLI can report it and exit with code 3.
#pragma once

#include <stdexcept>
#include <string>

namespace bnls {

class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define BNLS_DEFINE_ERROR(NAME)                                 \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& what) : Error(#NAME, what) {} \
  }

BNLS_DEFINE_ERROR(TailTooLarge);
BNLS_DEFINE_ERROR(NonRealGrid);
BNLS_DEFINE_ERROR(IoError);
BNLS_DEFINE_ERROR(FormatError);
BNLS_DEFINE_ERROR(StiffnessError);
BNLS_DEFINE_ERROR(RealAxisZero);
BNLS_DEFINE_ERROR(CountMismatch);
BNLS_DEFINE_ERROR(DerivativeVanishes);
BNLS_DEFINE_ERROR(ZeroVector);
BNLS_DEFINE_ERROR(PoleCollision);
BNLS_DEFINE_ERROR(SingularFrame);
BNLS_DEFINE_ERROR(NotAPole);
BNLS_DEFINE_ERROR(SingularLinearSystem);
BNLS_DEFINE_ERROR(UnsupportedSpectrum);
BNLS_DEFINE_ERROR(NotEven);
BNLS_DEFINE_ERROR(BlowUp);
BNLS_DEFINE_ERROR(TailContamination);
BNLS_DEFINE_ERROR(OutOfEnvelope);
BNLS_DEFINE_ERROR(BranchAmbiguous);
BNLS_DEFINE_ERROR(ConfigError);

#undef BNLS_DEFINE_ERROR

}  // namespace bnls
