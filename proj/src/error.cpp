// SPDX-License-Identifier: Apache-2.0

#include "palgol/error.hpp"

#include <sstream>

namespace palgol {

std::string Diagnostic::format(const std::string& file) const {
  std::ostringstream os;
  os << file << ':' << span.line << ':' << span.column << ": " << message;
  return os.str();
}

static std::string joinMessages(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += '\n';
    out += std::to_string(d.span.line) + ':' + std::to_string(d.span.column) + ": " + d.message;
  }
  return out;
}

CompileError::CompileError(std::vector<Diagnostic> diags)
    : std::runtime_error(joinMessages(diags)), diags_(std::move(diags)) {}

}  // namespace palgol
