#include "bridgenav/error.hpp"

namespace bridgenav {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::MissingVertex: return "MissingVertex";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotEulerian: return "NotEulerian";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::InvalidEndpoint: return "InvalidEndpoint";
    case ErrorCode::MissingLayer: return "MissingLayer";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace bridgenav
