#include "nlds/error.hpp"

#include <utility>

namespace nlds {

RangeError::RangeError(const std::string& what, double query, double lo, double hi)
    : Error(what), query_(query), lo_(lo), hi_(hi) {}

BlowUpError::BlowUpError(const std::string& what, double stamp, double linf)
    : Error(what), stamp_(stamp), linf_(linf) {}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "validation failed";
  for (const auto& d : items) {
    out += "\n  - ";
    out += d;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

IoError::IoError(const std::string& what, std::string path)
    : Error(what + ": " + path), path_(std::move(path)) {}

}  // namespace nlds
