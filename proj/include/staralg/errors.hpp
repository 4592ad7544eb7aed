#pragma once

#include <stdexcept>
#include <string>

namespace staralg {

// Every failure mode surfaced by the library. Codes map 1:1 onto the
// conditions callers can branch on; the CLI turns them into exit codes.
enum class ErrorCode {
    NotHermitian,
    DidNotConverge,
    NotNormal,
    UndefinedOnSpectrum,
    NonunitalViolation,
    NotSelfAdjoint,
    CapExceeded,
    NonSquareGenerator,
    DecompositionFailed,
    NotAProjection,
    NotAMember,
    NonUnitalAlgebra,
    NotEquivalent,
    StepCountTooSmall,
    NotAField,
    NotCommutative,
    NotALatticeHom,
    ZeroNotPreserved,
    InconsistentExtension,
    LevelOutOfRange,
    ElementNotPositive,
    NotUHFShape,
    InconsistentMeasure,
    SingularSystem,
    InconsistentMap,
    NotJordan,
    BadInput,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace staralg
