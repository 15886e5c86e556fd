#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "lwgas/sss.hpp"
#include "support.hpp"

namespace lwgas {
namespace {

using testing::fe;
using testing::fes;

const Prime& p17() {
  static const Prime p(17);
  return p;
}

SecretPolynomial poly_5_3() {
  return SecretPolynomial::from_coefficients(fes({5, 3}, p17()));
}

TEST(Sss, SampleConstantPolynomial) {
  Rng rng(1);
  auto poly = sample_polynomial(1, fe(9, p17()), rng);
  EXPECT_EQ(poly.threshold(), 1u);
  auto shares = issue_shares(poly, default_abscissae(6, p17()));
  for (const auto& s : shares) EXPECT_EQ(s.y, fe(9, p17()));
}

TEST(Sss, SampleShape) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    auto poly = sample_polynomial(4, fe(5, p17()), rng);
    ASSERT_EQ(poly.threshold(), 4u);
    ASSERT_EQ(poly.secret(), fe(5, p17()));
    ASSERT_FALSE(poly.coefficients().back().is_zero());
  }
}

TEST(Sss, SampleSeededDeterminism) {
  Rng a(77), b(77);
  EXPECT_EQ(sample_polynomial(3, fe(4, p17()), a).coefficients(),
            sample_polynomial(3, fe(4, p17()), b).coefficients());
}

TEST(Sss, SampleRejectsBadThreshold) {
  Rng rng(3);
  EXPECT_THROW((void)sample_polynomial(0, fe(1, p17()), rng), Error);
  EXPECT_THROW((void)sample_polynomial(18, fe(1, p17()), rng), Error);
}

TEST(Sss, FixedPolynomialShares) {
  auto poly = poly_5_3();
  EXPECT_EQ(poly.evaluate(fe(1, p17())), fe(8, p17()));
  EXPECT_EQ(poly.evaluate(fe(2, p17())), fe(11, p17()));
  auto xs = fes({1, 2}, p17());
  auto shares = issue_shares(poly, xs);
  ASSERT_EQ(shares.size(), 2u);
  EXPECT_EQ(shares[0].x, fe(1, p17()));
  EXPECT_EQ(shares[0].y, fe(8, p17()));
  EXPECT_EQ(shares[1].y, fe(11, p17()));
  EXPECT_EQ(shares[0].member_id, "U1");
  EXPECT_EQ(shares[1].member_id, "U2");
}

TEST(Sss, FromCoefficientsRejectsZeroLeading) {
  EXPECT_THROW((void)SecretPolynomial::from_coefficients(fes({5, 0}, p17())), Error);
  EXPECT_THROW((void)SecretPolynomial::from_coefficients({}), Error);
  EXPECT_NO_THROW((void)SecretPolynomial::from_coefficients(fes({0}, p17())));
}

TEST(Sss, IssueRejectsZeroOrDuplicateX) {
  auto poly = poly_5_3();
  auto with_zero = fes({1, 0}, p17());
  EXPECT_THROW((void)issue_shares(poly, with_zero), Error);
  auto dup = fes({3, 3}, p17());
  EXPECT_THROW((void)issue_shares(poly, dup), Error);
  EXPECT_TRUE(issue_shares(poly, std::vector<FieldElement>{}).empty());
}

TEST(Sss, IssueNamedMembers) {
  auto xs = fes({4, 9}, p17());
  std::vector<std::string> ids{"alpha", "beta"};
  auto shares = issue_shares(poly_5_3(), xs, ids);
  EXPECT_EQ(shares[1].member_id, "beta");
}

TEST(Sss, ReconstructExamples) {
  auto poly = poly_5_3();
  auto shares = issue_shares(poly, fes({1, 2}, p17()));
  EXPECT_EQ(reconstruct(shares, 2), fe(5, p17()));
  // 8 * L_0 + 11 * L_1 with L_0 = 2, L_1 = 16
  EXPECT_EQ((8 * 2 + 11 * 16) % 17, 5);

  std::vector<Share> single{{fe(3, p17()), fe(12, p17()), "U1"}};
  EXPECT_EQ(reconstruct(single, 1), fe(12, p17()));

  std::vector<Share> one{shares[0]};
  try {
    (void)reconstruct(one, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBelowThreshold);
  }
  std::vector<Share> dup{shares[0], shares[0]};
  try {
    (void)reconstruct(dup, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDuplicateX);
  }
}

TEST(Sss, CommitmentExamples) {
  Prime q(parse_decimal("1461501637330902918203684832716283019655932542983"));
  FieldElement s = fe(123456789, q);
  auto c = commit(s);
  EXPECT_TRUE(verify_commitment(s, c));
  EXPECT_FALSE(verify_commitment(s + FieldElement::one(q), c));
  EXPECT_EQ(commit(s), commit(fe(123456789, q)));
  EXPECT_EQ(c.digest.size(), crypto::kDigestBytes);
}

TEST(Sss, ShareFileRoundTrip) {
  Rng rng(5);
  Prime q(2017);
  auto poly = sample_polynomial(3, fe(77, q), rng);
  auto shares = issue_shares(poly, random_abscissae(7, q, rng));
  std::stringstream ss;
  write_share_file(ss, shares);
  std::string text = ss.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_NE(text.find("\"member_id\""), std::string::npos);
  auto back = read_share_file(ss, q);
  EXPECT_EQ(back, shares);

  std::stringstream bad("{\"member_id\": \"U1\", \"x\": \"abc\", \"y\": \"1\"}\n");
  EXPECT_THROW((void)read_share_file(bad, q), Error);
}

TEST(Sss, RandomAbscissaeDistinctNonzero) {
  Rng rng(6);
  Prime q(37);
  auto xs = random_abscissae(36, q, rng);
  std::set<BigInt> seen;
  for (const auto& x : xs) {
    EXPECT_FALSE(x.is_zero());
    seen.insert(x.residue());
  }
  EXPECT_EQ(seen.size(), 36u);
  EXPECT_THROW((void)random_abscissae(37, q, rng), Error);
}

// --- properties ------------------------------------------------------------

TEST(SssProperty, RoundTripAnyTSubset) {
  Prime q(parse_decimal("1461501637330902918203684832716283019655932542983"));
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 1 + i % 10;
    std::size_t t = 1 + (i / 10) % n;
    FieldElement s(random_below(rng, q.value()), q);
    auto poly = sample_polynomial(t, s, rng);
    auto shares = issue_shares(poly, random_abscissae(n, q, rng));
    std::shuffle(shares.begin(), shares.end(), rng);
    std::size_t m = t + (i % (n - t + 1));
    std::vector<Share> subset(shares.begin(), shares.begin() + static_cast<long>(m));
    ASSERT_EQ(reconstruct(subset, t), s);
  }
}

// Plain-integer oracle: with t-1 shares fixed, every candidate secret admits
// exactly one consistent polynomial of degree t-1.
TEST(SssProperty, ThresholdSecrecyEnumeration) {
  for (std::uint64_t q : {11u, 17u, 31u}) {
    Prime p(q);
    Rng rng(q);
    for (std::size_t t = 2; t <= 3; ++t) {
      FieldElement s(random_below(rng, p.value()), p);
      auto poly = sample_polynomial(t, s, rng);
      auto shares = issue_shares(poly, default_abscissae(t - 1, p));
      std::vector<std::uint64_t> count(q, 0);
      for (std::uint64_t c0 = 0; c0 < q; ++c0)
        for (std::uint64_t c1 = 0; c1 < q; ++c1)
          for (std::uint64_t c2 = 0; c2 < (t == 3 ? q : 1); ++c2) {
            bool ok = true;
            for (const auto& sh : shares) {
              std::uint64_t x = static_cast<std::uint64_t>(sh.x.residue());
              std::uint64_t y = (c0 + c1 * x + c2 * x * x) % q;
              if (y != static_cast<std::uint64_t>(sh.y.residue())) ok = false;
            }
            if (ok) ++count[c0];
          }
      const std::uint64_t expected = 1;
      for (std::uint64_t c0 = 0; c0 < q; ++c0) ASSERT_EQ(count[c0], expected);
      EXPECT_THROW((void)reconstruct(shares, t), Error);
    }
  }
}

}  // namespace
}  // namespace lwgas
