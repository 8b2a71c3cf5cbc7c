// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "palgol/ast.hpp"
#include "palgol/lexer.hpp"

namespace palgol {

/// Builds a Program from a token stream produced by tokenize().
/// Throws CompileError on the first syntax error.
Program parse(const std::vector<Token>& tokens);

/// tokenize() followed by parse().
Program parseSource(std::string_view source);

}  // namespace palgol
