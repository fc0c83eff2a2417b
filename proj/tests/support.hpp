#pragma once

#include "pdgal3/linear_solvers.hpp"

namespace testing_support {

using namespace pdgal3;

inline RatFunc P(const char* s) { return parse_ratfunc(s); }
inline Qt T(const char* s) { return parse_qt(s); }

inline RMatrix M(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::size_t n = rows.size(), m = rows.begin()->size(), i = 0;
  RMatrix a(n, m);
  for (auto& r : rows) {
    std::size_t j = 0;
    for (auto* s : r) a(i, j++) = P(s);
    ++i;
  }
  return a;
}

}  // namespace testing_support
