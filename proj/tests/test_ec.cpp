#include <gtest/gtest.h>

#include "lwgas/ec.hpp"
#include "support.hpp"

namespace lwgas {
namespace {

using testing::fe;
using testing::pt;
using testing::repeated_add;
using testing::test_curve;

CurveParams toy_curve() {
  CurveParams::Spec s;
  s.name = "toy5";
  s.p = 5;
  s.a = 0;
  s.b = 1;
  s.gx = 0;
  s.gy = 1;
  return CurveParams(s);
}

// Hand-evaluated tangent slope at (0,6): lambda = (3*0 + 6) / (2*6) = 1/2.
CurvePoint hand_doubling_of_0_6() {
  const BigInt p = 2017;
  BigInt half = (p + 1) / 2;  // 2^-1 mod 2017
  BigInt lambda = half;
  BigInt x3 = (lambda * lambda - 0 - 0) % p;
  x3 = (x3 + p) % p;
  BigInt y3 = ((lambda * (0 - x3) - 6) % p + p) % p;
  return CurvePoint(FieldElement(x3, test_curve().modulus()),
                    FieldElement(y3, test_curve().modulus()));
}

TEST(Ec, IsOnCurveExamples) {
  const auto& c = test_curve();
  EXPECT_TRUE(is_on_curve(pt(0, 6, c), c));
  EXPECT_FALSE(is_on_curve(pt(0, 7, c), c));
  EXPECT_TRUE(is_on_curve(CurvePoint::infinity(), c));
}

TEST(Ec, AddExamples) {
  const auto& c = test_curve();
  CurvePoint g = pt(0, 6, c);
  EXPECT_EQ(add(g, CurvePoint::infinity(), c), g);
  EXPECT_EQ(add(CurvePoint::infinity(), g, c), g);
  EXPECT_TRUE(add(g, negate(g), c).is_infinity());
  EXPECT_EQ(add(pt(0, 6, c), pt(0, 2011, c), c), CurvePoint::infinity());
  EXPECT_EQ(add(g, g, c), hand_doubling_of_0_6());
  EXPECT_EQ(add(g, g, c), pt(1513, 246, c));
}

TEST(Ec, AddRejectsOffCurve) {
  const auto& c = test_curve();
  try {
    (void)add(pt(0, 7, c), pt(0, 6, c), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOffCurve);
  }
  EXPECT_THROW((void)scalar_mul(3, pt(0, 7, c), c), Error);
}

TEST(Ec, ScalarMulExamples) {
  const auto& c = test_curve();
  CurvePoint g = pt(0, 6, c);
  EXPECT_EQ(scalar_mul(1, g, c), g);
  EXPECT_TRUE(scalar_mul(0, g, c).is_infinity());
  BigInt order = brute_force_order(c);
  EXPECT_TRUE(scalar_mul(order, g, c).is_infinity());
}

TEST(Ec, BruteForceOrderTestCurve) {
  EXPECT_EQ(brute_force_order(test_curve()), BigInt(2035));
  EXPECT_EQ(test_curve().order(), BigInt(2035));
  EXPECT_EQ(test_curve().scalar_order(), BigInt(37));
}

TEST(Ec, ToyCurveOrder) {
  // y^2 = x^3 + 1 mod 5: hand enumeration of the 25 pairs gives
  // (0,1) (0,4) (2,2) (2,3) (4,0) plus infinity.
  CurveParams toy = toy_curve();
  EXPECT_EQ(brute_force_order(toy), BigInt(6));
  int found = 0;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      if ((y * y) % 5 == (x * x * x + 1) % 5) ++found;
  EXPECT_EQ(found + 1, 6);
}

TEST(Ec, SingularCurveRejected) {
  CurveParams::Spec s;
  s.name = "cusp";
  s.p = 2017;
  s.a = 0;
  s.b = 0;
  s.gx = 1;
  s.gy = 1;
  try {
    CurveParams c(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularCurve);
  }
}

TEST(Ec, GeneratorOffCurveRejected) {
  CurveParams::Spec s = test_curve().spec();
  s.gy = 7;
  s.gx = 0;
  EXPECT_THROW(CurveParams c(s), Error);
}

TEST(Ec, BruteForceTooLarge) {
  try {
    (void)brute_force_order(testing::secp160r1());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
}

TEST(Ec, ProtocolGenerator) {
  const auto& c = test_curve();
  EXPECT_EQ(c.protocol_generator(), pt(1368, 374, c));
  EXPECT_EQ(c.protocol_generator(), scalar_mul(55, pt(0, 6, c), c));
  EXPECT_TRUE(scalar_mul(37, c.protocol_generator(), c).is_infinity());
  EXPECT_EQ(scalar_mul(8, c.protocol_generator(), c), pt(170, 1485, c));
}

TEST(Ec, ScalarMulCountsOnce) {
  const auto& c = test_curve();
  OpCounter cnt;
  {
    CountingScope s(cnt);
    (void)scalar_mul(29, c.protocol_generator(), c);
  }
  EXPECT_EQ(cnt.scalar_mul, 1u);
  EXPECT_GT(cnt.scalar_mul_field_mul, 0u);
  EXPECT_EQ(cnt.weighted_mul, 0u);
}

TEST(Ec, Secp160r1) {
  const auto& c = testing::secp160r1();
  EXPECT_TRUE(is_on_curve(c.generator(), c));
  EXPECT_TRUE(scalar_mul(c.order(), c.generator(), c).is_infinity());
  EXPECT_EQ(c.scalar_order(), c.order());
  EXPECT_EQ(bit_length(c.scalar_order()), 161u);
}

TEST(Ec, MeasuredMulsNearTemConstant) {
  const auto& c = testing::secp160r1();
  Rng rng(3);
  std::uint64_t total = 0;
  const int runs = 20;
  for (int i = 0; i < runs; ++i) {
    OpCounter cnt;
    CountingScope s(cnt);
    (void)scalar_mul(random_below(rng, c.scalar_order()), c.protocol_generator(), c);
    total += cnt.scalar_mul_field_mul;
  }
  double mean = static_cast<double>(total) / runs;
  EXPECT_GE(mean, 1189.0 / 3);
  EXPECT_LE(mean, 1189.0 * 3);
}

TEST(Ec, JsonRoundTrip) {
  for (const char* name : {"test2017", "secp160r1"}) {
    CurveParams c = builtin_curve(name);
    CurveParams back = curve_from_json(curve_to_json(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(back.order(), c.order());
    EXPECT_EQ(back.subgroup_order(), c.subgroup_order());
  }
  EXPECT_THROW((void)curve_from_json("{\"p\": \"17\"}"), Error);
  EXPECT_THROW((void)load_curve("builtin:nope"), Error);
}

TEST(Ec, LoadCurveFromDataFile) {
  CurveParams c = load_curve(LWGAS_DATA_DIR "/curves/test2017.json");
  EXPECT_EQ(c, test_curve());
}

TEST(Ec, EncodeX) {
  const auto& c = test_curve();
  EXPECT_EQ(encode_x(pt(1368, 374, c)), (Bytes{0x05, 0x58}));
  EXPECT_THROW((void)encode_x(CurvePoint::infinity()), Error);
}

// --- properties ------------------------------------------------------------

CurvePoint random_point(const CurveParams& c, Rng& rng) {
  return scalar_mul(random_below(rng, c.order()), c.generator(), c);
}

TEST(EcProperty, ClosureTestCurve) {
  const auto& c = test_curve();
  Rng rng(11);
  for (int i = 0; i < 600; ++i) {
    CurvePoint a = random_point(c, rng), b = random_point(c, rng);
    ASSERT_TRUE(is_on_curve(add(a, b, c), c));
  }
}

TEST(EcProperty, ClosureToyExhaustive) {
  CurveParams toy = toy_curve();
  std::vector<CurvePoint> pts{CurvePoint::infinity()};
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) {
      CurvePoint p = pt(x, y, toy);
      if (is_on_curve(p, toy)) pts.push_back(p);
    }
  ASSERT_EQ(pts.size(), 6u);
  for (const auto& a : pts)
    for (const auto& b : pts) {
      CurvePoint s = add(a, b, toy);
      ASSERT_TRUE(is_on_curve(s, toy));
      ASSERT_EQ(s, add(b, a, toy));
    }
}

TEST(EcProperty, AssociativityCommutativity) {
  const auto& c = test_curve();
  Rng rng(12);
  for (int i = 0; i < 600; ++i) {
    CurvePoint a = random_point(c, rng), b = random_point(c, rng), d = random_point(c, rng);
    if (i % 50 == 0) b = a;  // exercise the doubling branch
    ASSERT_EQ(add(a, b, c), add(b, a, c));
    ASSERT_EQ(add(add(a, b, c), d, c), add(a, add(b, d, c), c));
  }
}

TEST(EcProperty, ScalarMulAdditivity) {
  for (const CurveParams* c : {&test_curve(), &testing::secp160r1()}) {
    Rng rng(13);
    int cases = c == &test_curve() ? 600 : 60;
    for (int i = 0; i < cases; ++i) {
      BigInt a = random_below(rng, c->order() * 2);
      BigInt b = random_below(rng, c->order() * 2);
      const CurvePoint& g = c->generator();
      ASSERT_EQ(scalar_mul(a + b, g, *c), add(scalar_mul(a, g, *c), scalar_mul(b, g, *c), *c));
    }
  }
}

TEST(EcProperty, RepeatedAdditionOracle) {
  const auto& c = test_curve();
  Rng rng(14);
  std::vector<CurvePoint> bases{c.generator(), c.protocol_generator()};
  for (int i = 0; i < 10; ++i) bases.push_back(random_point(c, rng));
  for (const auto& b : bases) {
    CurvePoint acc = CurvePoint::infinity();
    for (std::uint64_t k = 0; k <= 50; ++k) {
      ASSERT_EQ(scalar_mul(k, b, c), acc) << "k=" << k;
      acc = add(acc, b, c);
    }
  }
}

}  // namespace
}  // namespace lwgas
