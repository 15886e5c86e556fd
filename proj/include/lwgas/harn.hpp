#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lwgas/field.hpp"
#include "lwgas/sss.hpp"
#include "lwgas/wire.hpp"

namespace lwgas::harn {

/// Multiplications modulo the large prime p are charged at this many
/// reference-field multiplications.
inline constexpr std::uint32_t kWideMulWeight = 41;

/// Prime-order subgroup of Z_p^*: q | p - 1, g of order q.
struct Group {
  Prime p;
  Prime q;
  FieldElement g;

  /// g = base^((p-1)/q) mod p. Throws if q does not divide p - 1 or the
  /// result is 1.
  static Group make(const BigInt& p, const BigInt& q, std::uint64_t base = 7,
                    std::uint32_t wide_weight = kWideMulWeight);

  std::string to_json() const;
  static Group from_json(std::string_view text);
};

/// p = 23, q = 11.
Group tiny_group();
/// The shipped 1024-bit p / 160-bit q group.
Group fixture_group();
/// Random q of `q_bits` bits and p = k q + 1 of `p_bits` bits, both prime.
/// q_bits = p_bits - 1 yields a safe prime.
Group generate_group(std::size_t p_bits, std::size_t q_bits, Rng& rng);

struct Params {
  Group group;
  std::size_t threshold = 0;
  SecretPolynomial f1, f2;
  FieldElement w1, w2;
  FieldElement d1, d2;
  FieldElement s;       // d1 f1(w1) + d2 f2(w2) mod q
  FieldElement target;  // g^s mod p

  /// Checks w_j against the roster, s != 0, and derives s and target.
  static Params make(Group group, SecretPolynomial f1, SecretPolynomial f2, FieldElement w1,
                     FieldElement w2, FieldElement d1, FieldElement d2,
                     std::span<const FieldElement> roster_xs);
};

struct Token {
  std::string member_id;
  FieldElement x;
  FieldElement f1x;
  FieldElement f2x;
};

struct Setup {
  Params params;
  std::vector<Token> tokens;
};

/// Two random degree-(t-1) polynomials over F_q, x_i = i + 1, random w_j
/// (re-drawn on collision with any x_i) and d_j.
Setup harn_init(std::size_t t, std::size_t n, const Group& group, Rng& rng);

struct Release {
  std::string member_id;
  FieldElement e;  // g^{c_i} mod p
};

/// c_i = sum_j d_j f_j(x_i) prod_{r != i} (w_j - x_r) / (x_i - x_r) over the
/// participating abscissae.
FieldElement harn_contribution(const Token& token, std::span<const FieldElement> participants,
                               const Params& params);
/// e_i = g^{c_i}, by a ladder over the bits of q. Throws if the token's x is
/// not among `participants` or fewer than t participants are declared.
Release harn_release(const Token& token, std::span<const FieldElement> participants,
                     const Params& params);

/// prod e_i == g^s. Returns false below threshold; throws on duplicate ids.
bool harn_verify(std::span<const Release> released, const Params& params);

wire::Message encode_release(const Release& release, std::uint32_t epoch, const Params& params);
Release decode_release(const wire::Message& msg, const Params& params);

}  // namespace lwgas::harn
