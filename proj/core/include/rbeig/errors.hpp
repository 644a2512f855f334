#pragma once

#include <stdexcept>
#include <string>

namespace rbeig {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed configuration, inconsistent dimensions, invalid
/// parameters. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its postcondition. The CLI maps
/// these to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define RBEIG_DEFINE_ERROR(Name, Base)          \
  class Name : public Base {                     \
   public:                                       \
    explicit Name(const std::string& what)       \
        : Base(std::string(#Name ": ") + what) {} \
  }

// linalg-core
RBEIG_DEFINE_ERROR(FactorizationFailed, NumericalError);
RBEIG_DEFINE_ERROR(NotConverged, NumericalError);
RBEIG_DEFINE_ERROR(SolverFailure, NumericalError);
RBEIG_DEFINE_ERROR(DegeneratePairing, NumericalError);
RBEIG_DEFINE_ERROR(SpectrumCollision, NumericalError);
RBEIG_DEFINE_ERROR(DimensionMismatch, InputError);

// hifi-diffusion
RBEIG_DEFINE_ERROR(MisalignedPartition, InputError);
RBEIG_DEFINE_ERROR(CoercivityViolation, InputError);

// rom-core
RBEIG_DEFINE_ERROR(EmptyBasis, NumericalError);
RBEIG_DEFINE_ERROR(RankDeficient, NumericalError);
RBEIG_DEFINE_ERROR(ReducedNotConverged, NumericalError);

// estimators
RBEIG_DEFINE_ERROR(GapViolated, InputError);
RBEIG_DEFINE_ERROR(ZeroDistance, NumericalError);
RBEIG_DEFINE_ERROR(ZeroResidual, NumericalError);

// affine-residual
RBEIG_DEFINE_ERROR(GramFactorizationFailed, NumericalError);
RBEIG_DEFINE_ERROR(NegativeQuadraticForm, NumericalError);

// cli
RBEIG_DEFINE_ERROR(UnknownStudy, InputError);
RBEIG_DEFINE_ERROR(ArtifactVersionMismatch, InputError);
RBEIG_DEFINE_ERROR(ConfigError, InputError);

#undef RBEIG_DEFINE_ERROR

}  // namespace rbeig
