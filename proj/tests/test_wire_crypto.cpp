#include <gtest/gtest.h>

#include "lwgas/crypto.hpp"
#include "lwgas/error.hpp"
#include "lwgas/wire.hpp"

namespace lwgas {
namespace {

Bytes str_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

TEST(Wire, EncodeLayout) {
  wire::Message m{wire::MessageType::kPublicShare, 0x01020304, "U7", {0xAA, 0xBB}};
  Bytes b = wire::encode(m);
  EXPECT_EQ(b, (Bytes{0x01, 0x01, 0x02, 0x03, 0x04, 0x02, 'U', '7', 0xAA, 0xBB}));
  EXPECT_EQ(wire::decode(b), m);
}

TEST(Wire, DecodeRejectsJunk) {
  EXPECT_THROW((void)wire::decode(Bytes{}), Error);
  EXPECT_THROW((void)wire::decode(Bytes{0x09, 0, 0, 0, 0, 0}), Error);
  EXPECT_THROW((void)wire::decode(Bytes{0x01, 0, 0, 0, 0, 5, 'U'}), Error);
}

TEST(Wire, ReaderWriter) {
  wire::Writer w;
  w.u16(0x1234);
  w.blob16(Bytes{1, 2, 3});
  Bytes out = w.take();
  EXPECT_EQ(out, (Bytes{0x12, 0x34, 0x00, 0x03, 1, 2, 3}));
  wire::Reader r(out);
  EXPECT_EQ(r.u16(), 0x1234);
  auto blob = r.blob16();
  EXPECT_EQ(Bytes(blob.begin(), blob.end()), (Bytes{1, 2, 3}));
  EXPECT_TRUE(r.done());
  EXPECT_THROW((void)r.u8(), Error);
}

TEST(Crypto, Sha256KnownAnswer) {
  auto d = crypto::sha256(str_bytes("abc"));
  EXPECT_EQ(to_hex(d), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Crypto, DeriveKeyIsLengthPrefixed) {
  Bytes ab = str_bytes("ab"), c = str_bytes("c"), a = str_bytes("a"), bc = str_bytes("bc");
  EXPECT_NE(crypto::derive_key("L", {ab, c}), crypto::derive_key("L", {a, bc}));
  EXPECT_NE(crypto::derive_key("L1", {ab}), crypto::derive_key("L2", {ab}));
  EXPECT_EQ(crypto::derive_key("L", {ab, c}), crypto::derive_key("L", {ab, c}));
}

TEST(Crypto, SealOpenRoundTrip) {
  Rng rng(1);
  crypto::Key key{};
  key[0] = 7;
  auto nonce = crypto::random_nonce(rng);
  Bytes pt = str_bytes("share bytes"), aad = str_bytes("U1->U2");
  Bytes sealed = crypto::seal(key, nonce, pt, aad);
  EXPECT_EQ(sealed.size(), pt.size() + crypto::kTagBytes);
  EXPECT_EQ(crypto::open(key, nonce, sealed, aad), pt);

  Bytes tampered = sealed;
  tampered[0] ^= 1;
  try {
    (void)crypto::open(key, nonce, tampered, aad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTagFailure);
  }
  EXPECT_THROW((void)crypto::open(key, nonce, sealed, str_bytes("U1->U3")), Error);
  crypto::Key other = key;
  other[1] = 1;
  EXPECT_THROW((void)crypto::open(other, nonce, sealed, aad), Error);
}

TEST(Crypto, ConstantTimeEqual) {
  EXPECT_TRUE(crypto::constant_time_equal(Bytes{1, 2}, Bytes{1, 2}));
  EXPECT_FALSE(crypto::constant_time_equal(Bytes{1, 2}, Bytes{1, 3}));
  EXPECT_FALSE(crypto::constant_time_equal(Bytes{1, 2}, Bytes{1}));
}

TEST(BigIntUtil, ParseAndBytes) {
  EXPECT_EQ(parse_decimal("2017"), BigInt(2017));
  EXPECT_EQ(parse_integer("0x7e1"), BigInt(2017));
  EXPECT_THROW((void)parse_decimal("12a"), std::invalid_argument);
  EXPECT_EQ(to_bytes_be(BigInt(258), 3), (Bytes{0, 1, 2}));
  EXPECT_EQ(from_bytes_be(Bytes{0, 1, 2}), BigInt(258));
  EXPECT_THROW((void)to_bytes_be(BigInt(70000), 2), std::exception);
  EXPECT_TRUE(is_probable_prime(parse_decimal("1461501637330902918203684832716283019655932542983")));
  EXPECT_FALSE(is_probable_prime(BigInt(2035)));
}

}  // namespace
}  // namespace lwgas
