// SPDX-License-Identifier: Apache-2.0

#include "palgol/pattern.hpp"

#include <algorithm>
#include <cassert>

namespace palgol {

AccessPattern AccessPattern::extended(const std::string& field) const {
  AccessPattern p = *this;
  p.fields.push_back(field);
  return p;
}

AccessPattern AccessPattern::concat(const AccessPattern& tail) const {
  AccessPattern p = *this;
  p.fields.insert(p.fields.end(), tail.fields.begin(), tail.fields.end());
  return p;
}

std::string AccessPattern::str(const std::string& var) const {
  std::string s = var;
  for (const auto& f : fields) s = f + "[" + s + "]";
  return s;
}

bool isSubpattern(const AccessPattern& a, const AccessPattern& b) {
  return a.size() <= b.size() && std::equal(a.fields.begin(), a.fields.end(), b.fields.begin());
}

bool isStrictSubpattern(const AccessPattern& a, const AccessPattern& b) {
  return a.size() < b.size() && isSubpattern(a, b);
}

AccessPattern quotient(const AccessPattern& b, const AccessPattern& a) {
  assert(isSubpattern(a, b));
  return AccessPattern(std::vector<std::string>(b.fields.begin() + a.size(), b.fields.end()));
}

}  // namespace palgol
