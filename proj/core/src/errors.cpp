#include "cournot/errors.hpp"

namespace cournot {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::model: return "model";
    case ErrorKind::partition: return "partition";
    case ErrorKind::mode: return "mode";
    case ErrorKind::assumption: return "assumption";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::fit: return "fit";
    case ErrorKind::input: return "input";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cournot
