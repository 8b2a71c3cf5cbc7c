// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <string>
#include <vector>

namespace palgol {

/// A consecutive field access rooted at the current vertex u. Fields are
/// stored innermost first: {Pred, Sum} denotes Sum[Pred[u]], {} denotes u.
struct AccessPattern {
  std::vector<std::string> fields;

  AccessPattern() = default;
  AccessPattern(std::initializer_list<std::string> f) : fields(f) {}
  explicit AccessPattern(std::vector<std::string> f) : fields(std::move(f)) {}

  std::size_t size() const { return fields.size(); }
  bool empty() const { return fields.empty(); }

  /// This pattern followed by one more field access.
  AccessPattern extended(const std::string& field) const;
  AccessPattern concat(const AccessPattern& tail) const;

  /// Source text with `var` as the root, e.g. "D[D[u]]".
  std::string str(const std::string& var = "u") const;

  auto operator<=>(const AccessPattern&) const = default;
  bool operator==(const AccessPattern&) const = default;
};

/// a ⪯ b: b is a consecutive field access starting from a.
bool isSubpattern(const AccessPattern& a, const AccessPattern& b);
bool isStrictSubpattern(const AccessPattern& a, const AccessPattern& b);

/// b / a: b with its innermost occurrence of a replaced by u. Requires a ⪯ b.
AccessPattern quotient(const AccessPattern& b, const AccessPattern& a);

}  // namespace palgol
