#pragma once

#include <stdexcept>
#include <string>

namespace ldspectra {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LDSPECTRA_ERROR(Name)               \
  class Name : public Error {               \
   public:                                  \
    explicit Name(const std::string& what)  \
        : Error(#Name ": " + what) {}       \
  }

// Truncated Fock space cannot represent the requested operator to tolerance.
LDSPECTRA_ERROR(TruncationError);
// A perturbative energy denominator is (numerically) zero.
LDSPECTRA_ERROR(SmallDenominator);
// Operation is only defined at zero detuning.
LDSPECTRA_ERROR(ResonanceRequired);
LDSPECTRA_ERROR(NotHermitian);
LDSPECTRA_ERROR(StepFailure);
LDSPECTRA_ERROR(GridMismatch);
LDSPECTRA_ERROR(SingularCharge);
LDSPECTRA_ERROR(ConfigError);

#undef LDSPECTRA_ERROR

}  // namespace ldspectra
