#include "lwgas/bigint.hpp"

#include <array>
#include <stdexcept>

#include <boost/multiprecision/miller_rabin.hpp>

namespace lwgas {

BigInt parse_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  BigInt out = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("not a decimal integer: " + std::string(text));
    }
    out = out * 10 + (c - '0');
  }
  return out;
}

BigInt parse_integer(std::string_view text) {
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    return from_bytes_be(from_hex(text.substr(2)));
  }
  return parse_decimal(text);
}

std::string to_decimal(const BigInt& value) { return value.str(); }

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {
int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad hex digit");
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  std::string padded(hex);
  if (padded.size() % 2 != 0) padded.insert(padded.begin(), '0');
  Bytes out(padded.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(hex_nibble(padded[2 * i]) << 4 |
                                       hex_nibble(padded[2 * i + 1]));
  }
  return out;
}

std::size_t bit_length(const BigInt& value) {
  if (value.is_zero()) return 0;
  return boost::multiprecision::msb(value) + 1;
}

std::size_t byte_length(const BigInt& value) {
  return (bit_length(value) + 7) / 8;
}

Bytes to_bytes_be(const BigInt& value, std::size_t width) {
  if (value < 0) throw std::invalid_argument("negative value cannot be encoded");
  Bytes raw;
  boost::multiprecision::export_bits(value, std::back_inserter(raw), 8);
  if (value.is_zero()) raw.clear();
  if (raw.size() > width) throw std::invalid_argument("value does not fit width");
  Bytes out(width - raw.size(), 0);
  out.insert(out.end(), raw.begin(), raw.end());
  return out;
}

BigInt from_bytes_be(std::span<const std::uint8_t> bytes) {
  BigInt out = 0;
  if (bytes.empty()) return out;
  boost::multiprecision::import_bits(out, bytes.begin(), bytes.end(), 8);
  return out;
}

Bytes random_bytes(Rng& rng, std::size_t count) {
  Bytes out(count);
  std::size_t i = 0;
  while (i < count) {
    auto word = rng();
    for (int k = 0; k < 8 && i < count; ++k, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * k));
    }
  }
  return out;
}

BigInt random_below(Rng& rng, const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("random_below: bound must be positive");
  const auto bits = bit_length(bound - 1);
  if (bits == 0) return 0;
  const auto nbytes = (bits + 7) / 8;
  const unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
  for (;;) {
    auto raw = random_bytes(rng, nbytes);
    raw[0] &= static_cast<std::uint8_t>(0xffu >> excess);
    BigInt candidate = from_bytes_be(raw);
    if (candidate < bound) return candidate;
  }
}

BigInt random_between(Rng& rng, const BigInt& lo, const BigInt& hi) {
  if (hi < lo) throw std::invalid_argument("random_between: empty range");
  return lo + random_below(rng, hi - lo + 1);
}

BigInt random_bits(Rng& rng, std::size_t bits) {
  if (bits == 0) return 0;
  BigInt top = BigInt(1) << (bits - 1);
  return top + random_below(rng, top);
}

namespace {
constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
    47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};
}

bool is_probable_prime(const BigInt& n, int rounds) {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // Fixed seed: primality of a given n must not depend on caller state.
  std::mt19937 gen(0x5eedu);
  return boost::multiprecision::miller_rabin_test(n, rounds, gen);
}

}  // namespace lwgas
