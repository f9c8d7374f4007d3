#include <factorstab/error.hpp>

namespace factorstab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidInput, what);
}

}  // namespace factorstab
