// Exact rationals backed by GMP.
#pragma once

#include <gmpxx.h>

#include <string>

namespace pdgal3 {

using Q = mpq_class;
using Z = mpz_class;

inline bool is_zero(const Q& q) { return sgn(q) == 0; }
inline bool is_zero(const Z& z) { return sgn(z) == 0; }

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

inline std::string to_string(const Q& q) { return q.get_str(); }

}  // namespace pdgal3
