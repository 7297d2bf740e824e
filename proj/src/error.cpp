#include "qsphere/error.hpp"

namespace qsphere {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ParityMismatch: return "ParityMismatch";
        case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
        case ErrorCode::SameSphere: return "SameSphere";
        case ErrorCode::EqualPoints: return "EqualPoints";
        case ErrorCode::MixedSphereSizes: return "MixedSphereSizes";
        case ErrorCode::MixedRadii: return "MixedRadii";
        case ErrorCode::PNotInRange: return "PNotInRange";
        case ErrorCode::ZeroScalar: return "ZeroScalar";
        case ErrorCode::OddDimension: return "OddDimension";
        case ErrorCode::EvenDimension: return "EvenDimension";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IOError: return "IOError";
    }
    return "Unknown";
}

}  // namespace qsphere
