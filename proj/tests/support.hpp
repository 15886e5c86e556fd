#pragma once

#include <cstdint>
#include <vector>

#include "lwgas/ec.hpp"
#include "lwgas/field.hpp"

namespace lwgas::testing {

inline FieldElement fe(std::int64_t v, const Prime& p) { return FieldElement(BigInt(v), p); }

inline std::vector<FieldElement> fes(std::initializer_list<std::int64_t> vs, const Prime& p) {
  std::vector<FieldElement> out;
  for (auto v : vs) out.push_back(fe(v, p));
  return out;
}

inline const CurveParams& test_curve() {
  static const CurveParams c = builtin_curve("test2017");
  return c;
}

inline const CurveParams& secp160r1() {
  static const CurveParams c = builtin_curve("secp160r1");
  return c;
}

inline CurvePoint pt(std::int64_t x, std::int64_t y, const CurveParams& c) {
  return CurvePoint(fe(x, c.modulus()), fe(y, c.modulus()));
}

// k copies of p added one at a time.
inline CurvePoint repeated_add(std::uint64_t k, const CurvePoint& p, const CurveParams& c) {
  CurvePoint acc = CurvePoint::infinity();
  for (std::uint64_t i = 0; i < k; ++i) acc = add(acc, p, c);
  return acc;
}

}  // namespace lwgas::testing
