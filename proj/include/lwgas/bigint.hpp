#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lwgas {

using BigInt = boost::multiprecision::cpp_int;
using Bytes = std::vector<std::uint8_t>;

/// Deterministic randomness source. Every protocol entry point takes one of
/// these explicitly so seeded runs are reproducible.
using Rng = std::mt19937_64;

/// Parses a non-negative decimal string. Throws std::invalid_argument on junk.
BigInt parse_decimal(std::string_view text);
/// Accepts "0x..." hex or plain decimal.
BigInt parse_integer(std::string_view text);
std::string to_decimal(const BigInt& value);
std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);

std::size_t bit_length(const BigInt& value);
std::size_t byte_length(const BigInt& value);

/// Big-endian, left-padded to `width` bytes. Throws if the value does not fit.
Bytes to_bytes_be(const BigInt& value, std::size_t width);
BigInt from_bytes_be(std::span<const std::uint8_t> bytes);

/// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
BigInt random_below(Rng& rng, const BigInt& bound);
/// Uniform integer in [lo, hi].
BigInt random_between(Rng& rng, const BigInt& lo, const BigInt& hi);
/// Uniform integer with exactly `bits` bits (top bit set).
BigInt random_bits(Rng& rng, std::size_t bits);

Bytes random_bytes(Rng& rng, std::size_t count);

/// Miller-Rabin with `rounds` random bases, after trial division.
bool is_probable_prime(const BigInt& n, int rounds = 64);

}  // namespace lwgas
