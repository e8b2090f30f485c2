#include "optomech/errors.hpp"

namespace optomech {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::range: return "range";
    case ErrorCode::config: return "config";
    case ErrorCode::degenerate_subspace: return "degenerate_subspace";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::no_root: return "no_root";
    case ErrorCode::regime: return "regime";
    case ErrorCode::undefined: return "undefined";
  }
  return "unknown";
}

}  // namespace optomech
