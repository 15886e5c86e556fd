#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "lwgas/field.hpp"

namespace lwgas {

/// Affine point on a short-Weierstrass curve, or the point at infinity.
class CurvePoint {
 public:
  static CurvePoint infinity() { return CurvePoint(); }
  CurvePoint(FieldElement x, FieldElement y) : coords_(Coords{std::move(x), std::move(y)}) {}

  bool is_infinity() const { return !coords_.has_value(); }
  /// Precondition: !is_infinity().
  const FieldElement& x() const;
  const FieldElement& y() const;

  friend bool operator==(const CurvePoint& a, const CurvePoint& b);

 private:
  CurvePoint() = default;
  struct Coords {
    FieldElement x;
    FieldElement y;
  };
  std::optional<Coords> coords_;
};

std::ostream& operator<<(std::ostream& os, const CurvePoint& p);

/// y^2 = x^3 + A x + B over F_p, with a base point and (optionally) the
/// group order and a prime subgroup order. Protocol scalars live modulo
/// `scalar_order()`; the protocol base point is `protocol_generator()`,
/// i.e. the base point scaled by the cofactor.
class CurveParams {
 public:
  struct Spec {
    std::string name;
    BigInt p, a, b, gx, gy;
    BigInt order = 0;           // 0 when not yet known
    BigInt subgroup_order = 0;  // 0 when no prime subgroup is designated
  };

  /// Validates non-singularity, the base point, and (when orders are given)
  /// that subgroup_order is prime, divides order, and annihilates the
  /// protocol generator.
  explicit CurveParams(const Spec& spec);

  const std::string& name() const { return d_->spec.name; }
  const Prime& modulus() const { return d_->modulus; }
  const FieldElement& a() const { return d_->a; }
  const FieldElement& b() const { return d_->b; }
  const CurvePoint& generator() const { return d_->generator; }
  const BigInt& order() const { return d_->spec.order; }
  const BigInt& subgroup_order() const { return d_->spec.subgroup_order; }
  const Spec& spec() const { return d_->spec; }

  /// Prime subgroup order if designated, else full order. Throws if neither
  /// is known.
  const BigInt& scalar_order() const;
  /// F_r with r = scalar_order(); the field in which secret shares live.
  const Prime& scalar_field() const;
  /// cofactor * generator(), generating the subgroup of order scalar_order().
  const CurvePoint& protocol_generator() const;

  /// Bytes needed for one coordinate.
  std::size_t coordinate_bytes() const { return d_->modulus.byte_length(); }

  friend bool operator==(const CurveParams& a, const CurveParams& b) {
    return a.d_ == b.d_ || (a.d_->spec.p == b.d_->spec.p && a.d_->spec.a == b.d_->spec.a &&
                            a.d_->spec.b == b.d_->spec.b && a.d_->spec.gx == b.d_->spec.gx &&
                            a.d_->spec.gy == b.d_->spec.gy);
  }

 private:
  struct Data {
    Spec spec;
    Prime modulus;
    FieldElement a, b;
    CurvePoint generator;
    std::optional<Prime> scalar_field;
    std::optional<CurvePoint> protocol_generator;
  };
  std::shared_ptr<const Data> d_;
};

bool is_on_curve(const CurvePoint& pt, const CurveParams& curve);
CurvePoint negate(const CurvePoint& pt);
/// Chord-tangent addition. Throws kOffCurve if either input is off the curve.
CurvePoint add(const CurvePoint& p1, const CurvePoint& p2, const CurveParams& curve);
/// Left-to-right double-and-add over the bits of k (k >= 0, not reduced).
/// Counts as one scalar multiplication in the active OpCounter.
CurvePoint scalar_mul(const BigInt& k, const CurvePoint& pt, const CurveParams& curve);

/// Exhaustive point count (including infinity). Throws kTooLarge when the
/// modulus exceeds 10^6.
BigInt brute_force_order(const CurveParams& curve);

/// Builtin parameter sets: "test2017" (y^2 = x^3 + 6x + 36 mod 2017) and
/// "secp160r1".
CurveParams builtin_curve(std::string_view name);
/// "builtin:<name>" or a path to a JSON curve file.
CurveParams load_curve(std::string_view ref);
CurveParams curve_from_json(std::string_view json_text);
std::string curve_to_json(const CurveParams& curve);

/// Encodes x-coordinate for hashing; throws kInfinityPoint on infinity.
Bytes encode_x(const CurvePoint& pt);

}  // namespace lwgas
