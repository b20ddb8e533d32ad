#include "codesign/errors.hpp"

namespace codesign {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NumericalInstability: return "NumericalInstability";
    case ErrorCode::SynthesisFailure: return "SynthesisFailure";
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::InvalidStride: return "InvalidStride";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::InvalidWidth: return "InvalidWidth";
    case ErrorCode::TooManyQubits: return "TooManyQubits";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Config: return "ConfigError";
    }
    return "Error";
}

} // namespace codesign
