#include "expanderlab/errors.hpp"

namespace expanderlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DenominatorOutsideS: return "DenominatorOutsideS";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::NotSquareFree: return "NotSquareFree";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::NotComposite: return "NotComposite";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotPGroup: return "NotPGroup";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::TableMismatch: return "TableMismatch";
    case ErrorCode::ProjectionNotOnto: return "ProjectionNotOnto";
    case ErrorCode::FixedVectorExists: return "FixedVectorExists";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(std::string_view module, ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(module) + "/" + std::string(to_string(code)) + ": " +
                         message),
      module_(module),
      code_(code) {}

std::string Error::qualified_code() const {
  return module_ + "/" + std::string(to_string(code_));
}

}  // namespace expanderlab
