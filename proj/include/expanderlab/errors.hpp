#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expanderlab {

enum class ErrorCode {
  InvalidArgument,
  DenominatorOutsideS,
  BadPrime,
  NotSquareFree,
  SingularMatrix,
  SizeCapExceeded,
  NotComposite,
  NotNormal,
  NotPGroup,
  HypothesisViolated,
  ZeroVector,
  TableMismatch,
  ProjectionNotOnto,
  FixedVectorExists,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries the module it came from, so the
// CLI can print codes like "finite-quotient/SizeCapExceeded".
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  std::string qualified_code() const;

 private:
  std::string module_;
  ErrorCode code_;
};

namespace modules {
inline constexpr std::string_view kExactArith = "exact-arith";
inline constexpr std::string_view kFiniteQuotient = "finite-quotient";
inline constexpr std::string_view kWordsFree = "words-free";
inline constexpr std::string_view kWalkSpectral = "walk-spectral";
inline constexpr std::string_view kGrowthLab = "growth-lab";
inline constexpr std::string_view kCliHarness = "cli-harness";
}  // namespace modules

}  // namespace expanderlab
