#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsphere {

enum class ErrorCode {
    NotPrime,
    EvenCharacteristic,
    TooLarge,
    DivisionByZero,
    DimensionMismatch,
    ParityMismatch,
    DimensionTooSmall,
    SameSphere,
    EqualPoints,
    MixedSphereSizes,
    MixedRadii,
    PNotInRange,
    ZeroScalar,
    OddDimension,
    EvenDimension,
    InvalidArgument,
    ParseError,
    IOError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qsphere
