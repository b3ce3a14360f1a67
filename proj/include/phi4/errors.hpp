#pragma once

#include <stdexcept>
#include <string>

namespace phi4 {

enum class ErrorCode {
  MissingKey,
  NonPositiveSpacing,
  NonPowerOfTwoSites,
  InvalidParameter,
  TooManyQubits,
  CutoffTooSmall,
  ZeroMass,
  NonPositiveEnergy,
  OutOfRange,
  NonPowerOfTwoCutoff,
  InvalidPartition,
  ConjectureFlagRequired,
  MissingDense,
  SelectNotInvolution,
  NonHermitianFragment,
  DegenerateFit,
  ZeroAlphaComm,
  InfeasibleDistance,
  BelowThreshold,
  ZeroMomentum,
  ConfigParse,
  IoError,
  SuiteFailure,
};

const char* error_name(ErrorCode c);

/// Every library failure is reported through this type so callers can switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phi4
