#include "lwgas/ec.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace lwgas {

const FieldElement& CurvePoint::x() const {
  if (!coords_) throw Error(ErrorKind::kInfinityPoint, "point at infinity has no coordinates");
  return coords_->x;
}

const FieldElement& CurvePoint::y() const {
  if (!coords_) throw Error(ErrorKind::kInfinityPoint, "point at infinity has no coordinates");
  return coords_->y;
}

bool operator==(const CurvePoint& a, const CurvePoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() == b.is_infinity();
  return a.coords_->x == b.coords_->x && a.coords_->y == b.coords_->y;
}

std::ostream& operator<<(std::ostream& os, const CurvePoint& p) {
  if (p.is_infinity()) return os << "O";
  return os << "(" << p.x().residue() << ", " << p.y().residue() << ")";
}

namespace {

bool on_curve_quiet(const CurvePoint& pt, const FieldElement& a, const FieldElement& b) {
  if (pt.is_infinity()) return true;
  if (!(pt.x().modulus() == a.modulus()) || !(pt.y().modulus() == a.modulus())) return false;
  OpCounter scratch;
  CountingScope quiet(scratch);
  const auto& x = pt.x();
  return pt.y() * pt.y() == x * x * x + a * x + b;
}

// Group law without input validation. Field multiplications are counted.
CurvePoint add_unchecked(const CurvePoint& p1, const CurvePoint& p2, const FieldElement& a) {
  if (p1.is_infinity()) return p2;
  if (p2.is_infinity()) return p1;
  const auto& x1 = p1.x();
  const auto& y1 = p1.y();
  const auto& x2 = p2.x();
  const auto& y2 = p2.y();
  FieldElement lambda = FieldElement::zero(x1.modulus());
  if (x1 == x2) {
    if ((y1 + y2).is_zero()) return CurvePoint::infinity();
    auto x1sq = x1 * x1;
    lambda = (x1sq + x1sq + x1sq + a) * (y1 + y1).inv();
  } else {
    lambda = (y2 - y1) * (x2 - x1).inv();
  }
  auto x3 = lambda * lambda - x1 - x2;
  auto y3 = lambda * (x1 - x3) - y1;
  return {std::move(x3), std::move(y3)};
}

}  // namespace

CurveParams::CurveParams(const Spec& spec) {
  Prime modulus(spec.p);
  if (spec.p == 3) {
    throw Error(ErrorKind::kInvalidArgument, "curve field characteristic must differ from 2 and 3");
  }
  FieldElement a(spec.a, modulus), b(spec.b, modulus);
  {
    OpCounter scratch;
    CountingScope quiet(scratch);
    FieldElement four(4, modulus), tw7(27, modulus);
    if ((four * a * a * a + tw7 * b * b).is_zero()) {
      throw Error(ErrorKind::kSingularCurve, "curve is singular (4A^3 + 27B^2 = 0)");
    }
  }
  CurvePoint g(FieldElement(spec.gx, modulus), FieldElement(spec.gy, modulus));
  if (!on_curve_quiet(g, a, b)) {
    throw Error(ErrorKind::kOffCurve, "generator is not on the curve");
  }
  auto data = std::make_shared<Data>(Data{spec, modulus, a, b, g, std::nullopt, std::nullopt});
  if (spec.order < 0 || spec.subgroup_order < 0) {
    throw Error(ErrorKind::kInvalidArgument, "curve orders must be non-negative");
  }
  if (spec.subgroup_order > 0) {
    if (spec.order > 0 && spec.order % spec.subgroup_order != 0) {
      throw Error(ErrorKind::kInvalidArgument, "subgroup order does not divide group order");
    }
    data->scalar_field.emplace(spec.subgroup_order);
  } else if (spec.order > 0 && is_probable_prime(spec.order)) {
    data->scalar_field.emplace(spec.order);
  }
  d_ = data;
  if (spec.order > 0 || spec.subgroup_order > 0) {
    OpCounter scratch;
    CountingScope quiet(scratch);
    const BigInt cofactor = spec.subgroup_order > 0 && spec.order > 0
                                ? BigInt(spec.order / spec.subgroup_order)
                                : BigInt(1);
    auto pg = scalar_mul(cofactor, g, *this);
    if (pg.is_infinity()) {
      throw Error(ErrorKind::kInvalidArgument, "cofactor multiple of generator is infinity");
    }
    if (!scalar_mul(scalar_order(), pg, *this).is_infinity()) {
      throw Error(ErrorKind::kInvalidArgument, "declared order does not annihilate the generator");
    }
    data->protocol_generator = pg;
  }
}

const BigInt& CurveParams::scalar_order() const {
  if (d_->spec.subgroup_order > 0) return d_->spec.subgroup_order;
  if (d_->spec.order > 0) return d_->spec.order;
  throw Error(ErrorKind::kInvalidArgument, "curve '" + name() + "' has no known order");
}

const Prime& CurveParams::scalar_field() const {
  if (!d_->scalar_field) {
    throw Error(ErrorKind::kInvalidArgument,
                "curve '" + name() + "' has no prime-order subgroup for protocol scalars");
  }
  return *d_->scalar_field;
}

const CurvePoint& CurveParams::protocol_generator() const {
  if (!d_->protocol_generator) {
    throw Error(ErrorKind::kInvalidArgument, "curve '" + name() + "' has no known order");
  }
  return *d_->protocol_generator;
}

bool is_on_curve(const CurvePoint& pt, const CurveParams& curve) {
  return on_curve_quiet(pt, curve.a(), curve.b());
}

CurvePoint negate(const CurvePoint& pt) {
  if (pt.is_infinity()) return pt;
  return {pt.x(), -pt.y()};
}

CurvePoint add(const CurvePoint& p1, const CurvePoint& p2, const CurveParams& curve) {
  if (!is_on_curve(p1, curve) || !is_on_curve(p2, curve)) {
    throw Error(ErrorKind::kOffCurve, "point addition with an off-curve input");
  }
  return add_unchecked(p1, p2, curve.a());
}

CurvePoint scalar_mul(const BigInt& k, const CurvePoint& pt, const CurveParams& curve) {
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "negative scalar");
  if (!is_on_curve(pt, curve)) {
    throw Error(ErrorKind::kOffCurve, "scalar multiplication of an off-curve point");
  }
  if (auto* counter = active_counter()) ++counter->scalar_mul;
  detail::ScalarMulMarker inside;
  if (k.is_zero() || pt.is_infinity()) return CurvePoint::infinity();
  const auto top = boost::multiprecision::msb(k);
  CurvePoint acc = pt;
  for (auto bit = static_cast<long>(top) - 1; bit >= 0; --bit) {
    acc = add_unchecked(acc, acc, curve.a());
    if (boost::multiprecision::bit_test(k, static_cast<unsigned>(bit))) {
      acc = add_unchecked(acc, pt, curve.a());
    }
  }
  return acc;
}

BigInt brute_force_order(const CurveParams& curve) {
  const BigInt& p_big = curve.modulus().value();
  if (p_big > 1000000) {
    throw Error(ErrorKind::kTooLarge, "modulus too large for exhaustive point count");
  }
  const auto p = p_big.convert_to<std::uint64_t>();
  const auto a = curve.a().residue().convert_to<std::uint64_t>();
  const auto b = curve.b().residue().convert_to<std::uint64_t>();
  std::vector<std::uint32_t> roots(p, 0);
  for (std::uint64_t y = 0; y < p; ++y) ++roots[(y * y) % p];
  std::uint64_t count = 1;  // infinity
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t rhs = ((x * x % p) * x + a * x + b) % p;
    count += roots[rhs];
  }
  return count;
}

namespace {

CurveParams::Spec test2017_spec() {
  // Generator (0, 6) has order 2035 = 5 * 11 * 37; protocol scalars use the
  // order-37 subgroup.
  return {"test2017", 2017, 6, 36, 0, 6, 2035, 37};
}

CurveParams::Spec secp160r1_spec() {
  auto hex = [](std::string_view h) { return from_bytes_be(from_hex(h)); };
  return {"secp160r1",
          hex("ffffffffffffffffffffffffffffffff7fffffff"),
          hex("ffffffffffffffffffffffffffffffff7ffffffc"),
          hex("1c97befc54bd7a8b65acf89f81d4d4adc565fa45"),
          hex("4a96b5688ef573284664698968c38bb913cbfc82"),
          hex("23a628553168947d59dcc912042351377ac5fb32"),
          hex("0100000000000000000001f4c8f927aed3ca752257"),
          hex("0100000000000000000001f4c8f927aed3ca752257")};
}

}  // namespace

CurveParams builtin_curve(std::string_view name) {
  // Constructed once; CurveParams shares its data between copies.
  static const CurveParams test2017{test2017_spec()};
  static const CurveParams secp160r1{secp160r1_spec()};
  if (name == "test2017") return test2017;
  if (name == "secp160r1") return secp160r1;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown builtin curve '" + std::string(name) + "' (known: test2017, secp160r1)");
}

CurveParams curve_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kDecode, std::string("curve file: ") + e.what());
  }
  auto field = [&](const char* key, bool required) -> BigInt {
    if (!j.contains(key)) {
      if (required) throw Error(ErrorKind::kDecode, std::string("curve file missing '") + key + "'");
      return 0;
    }
    if (!j[key].is_string()) {
      throw Error(ErrorKind::kDecode, std::string("curve field '") + key + "' must be a decimal string");
    }
    try {
      return parse_decimal(j[key].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorKind::kDecode, std::string("curve field '") + key + "': " + e.what());
    }
  };
  CurveParams::Spec spec;
  spec.name = j.value("name", std::string("custom"));
  spec.p = field("p", true);
  spec.a = field("A", true);
  spec.b = field("B", true);
  spec.gx = field("Gx", true);
  spec.gy = field("Gy", true);
  spec.order = field("order", false);
  spec.subgroup_order = field("subgroup_order", false);
  return CurveParams(spec);
}

std::string curve_to_json(const CurveParams& curve) {
  const auto& s = curve.spec();
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["p"] = to_decimal(s.p);
  j["A"] = to_decimal(s.a);
  j["B"] = to_decimal(s.b);
  j["Gx"] = to_decimal(s.gx);
  j["Gy"] = to_decimal(s.gy);
  j["order"] = to_decimal(s.order);
  j["subgroup_order"] = to_decimal(s.subgroup_order);
  return j.dump(2);
}

CurveParams load_curve(std::string_view ref) {
  constexpr std::string_view kBuiltin = "builtin:";
  if (ref.substr(0, kBuiltin.size()) == kBuiltin) {
    return builtin_curve(ref.substr(kBuiltin.size()));
  }
  std::ifstream in{std::string(ref)};
  if (!in) throw Error(ErrorKind::kIo, "cannot open curve file '" + std::string(ref) + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return curve_from_json(buf.str());
}

Bytes encode_x(const CurvePoint& pt) { return pt.x().to_bytes(); }

}  // namespace lwgas
