#pragma once

#include <stdexcept>
#include <string>

namespace hyperfact {

enum class ErrorCode {
  NotPrime,
  DegreeZero,
  TooLarge,
  DivisionByZero,
  AllZeroCoefficients,
  Singular,
  AlphaZero,
  BadResidue,
  NotPrimePower,
  IsBaseFactor,
  DuplicateFactor,
  SameFactor,
  SizeMismatch,
  CapExceeded,
  OutOfRange,
  WrongCharacteristic,
  EvenDegree,
  WrongField,
  AlphaInSubfield,
  ParseError,
  IoError,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperfact
