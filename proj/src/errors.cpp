#include "phi4/errors.hpp"

namespace phi4 {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::NonPositiveSpacing: return "NonPositiveSpacing";
    case ErrorCode::NonPowerOfTwoSites: return "NonPowerOfTwoSites";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::TooManyQubits: return "TooManyQubits";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonPowerOfTwoCutoff: return "NonPowerOfTwoCutoff";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::ConjectureFlagRequired: return "ConjectureFlagRequired";
    case ErrorCode::MissingDense: return "MissingDense";
    case ErrorCode::SelectNotInvolution: return "SelectNotInvolution";
    case ErrorCode::NonHermitianFragment: return "NonHermitianFragment";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::ZeroAlphaComm: return "ZeroAlphaComm";
    case ErrorCode::InfeasibleDistance: return "InfeasibleDistance";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SuiteFailure: return "SuiteFailure";
  }
  return "Unknown";
}

}  // namespace phi4
