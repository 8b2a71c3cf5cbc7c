// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "palgol/ast.hpp"

namespace palgol {

/// Canonical source text. parse(prettyPrint(p)) reproduces p up to spans.
std::string prettyPrint(const Program& p);
std::string prettyPrint(const Expr& e);

/// S-expression dump of the tree, one node per line, for golden tests.
std::string dumpTree(const Program& p);

}  // namespace palgol
