#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "lwgas/bigint.hpp"

namespace lwgas::crypto {

inline constexpr std::size_t kDigestBytes = 32;
inline constexpr std::size_t kKeyBytes = 32;
inline constexpr std::size_t kNonceBytes = 12;
inline constexpr std::size_t kTagBytes = 16;
inline constexpr std::string_view kCipherSuite = "AES-256-GCM+SHA-256";

using Digest = std::array<std::uint8_t, kDigestBytes>;
using Key = std::array<std::uint8_t, kKeyBytes>;
using Nonce = std::array<std::uint8_t, kNonceBytes>;

Digest sha256(std::span<const std::uint8_t> data);

/// SHA-256 over a domain-separation label followed by length-prefixed parts.
Digest derive_key(std::string_view label, std::initializer_list<std::span<const std::uint8_t>> parts);

/// Constant-time equality for equal-length buffers.
bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// AES-256-GCM. Returns ciphertext || tag.
Bytes seal(const Key& key, const Nonce& nonce, std::span<const std::uint8_t> plaintext,
           std::span<const std::uint8_t> aad);

/// Throws Error(kTagFailure) when authentication fails.
Bytes open(const Key& key, const Nonce& nonce, std::span<const std::uint8_t> sealed,
           std::span<const std::uint8_t> aad);

Nonce random_nonce(Rng& rng);

}  // namespace lwgas::crypto
