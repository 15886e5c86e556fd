#include "lwgas/harn.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lwgas::harn {

Group Group::make(const BigInt& p, const BigInt& q, std::uint64_t base, std::uint32_t wide_weight) {
  Prime pp(p, wide_weight);
  Prime qq(q);
  if ((p - 1) % q != 0) throw Error(ErrorKind::kInvalidArgument, "q must divide p - 1");
  FieldElement g = FieldElement(BigInt(base), pp);
  {
    OpCounter scratch;
    CountingScope quiet(scratch);
    g = g.pow((p - 1) / q);
    if (g == FieldElement::one(pp)) {
      throw Error(ErrorKind::kInvalidArgument, "base does not generate the order-q subgroup");
    }
    if (!(g.pow(q) == FieldElement::one(pp))) {
      throw Error(ErrorKind::kInvalidArgument, "generator order is not q");
    }
  }
  return Group{pp, qq, g};
}

std::string Group::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = to_decimal(p.value());
  j["q"] = to_decimal(q.value());
  j["g"] = to_decimal(g.residue());
  j["p_bits"] = bit_length(p.value());
  j["q_bits"] = bit_length(q.value());
  return j.dump(2);
}

Group Group::from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    auto group = make(parse_decimal(j.at("p").get<std::string>()),
                      parse_decimal(j.at("q").get<std::string>()));
    if (j.contains("g") && parse_decimal(j["g"].get<std::string>()) != group.g.residue()) {
      throw Error(ErrorKind::kDecode, "stored generator does not match 7^((p-1)/q)");
    }
    return group;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kDecode, std::string("harn group: ") + e.what());
  }
}

Group tiny_group() { return Group::make(23, 11); }

namespace {

// Montgomery ladder over a fixed number of bits: two multiplications per
// bit whatever the exponent, so a member's cost depends only on |q|.
FieldElement ladder_pow(const FieldElement& base, const BigInt& exponent, std::size_t bits) {
  FieldElement r0 = FieldElement::one(base.modulus());
  FieldElement r1 = base;
  for (std::size_t i = bits; i-- > 0;) {
    if (boost::multiprecision::bit_test(exponent, static_cast<unsigned>(i))) {
      r0 = r0 * r1;
      r1 = r1 * r1;
    } else {
      r1 = r0 * r1;
      r0 = r0 * r0;
    }
  }
  return r0;
}

// Generated by `lwgas gen-params --p-bits 1024 --q-bits 160 --seed 2020`; the
// same values live in data/harn_1024_160.json.
constexpr std::string_view kFixtureP =
#include "harn_fixture_p.inc"
    ;
constexpr std::string_view kFixtureQ =
#include "harn_fixture_q.inc"
    ;

}  // namespace

Group fixture_group() {
  static const Group group = Group::make(parse_decimal(kFixtureP), parse_decimal(kFixtureQ));
  return group;
}

Group generate_group(std::size_t p_bits, std::size_t q_bits, Rng& rng) {
  if (q_bits < 2 || p_bits <= q_bits) {
    throw Error(ErrorKind::kInvalidArgument, "need p_bits > q_bits >= 2");
  }
  for (;;) {
    BigInt q;
    do {
      q = random_bits(rng, q_bits) | 1;
    } while (!is_probable_prime(q));
    const BigInt k_lo = ((BigInt(1) << (p_bits - 1)) - 1) / q + 1;
    const BigInt k_hi = ((BigInt(1) << p_bits) - 2) / q;
    if (k_lo > k_hi) continue;
    // A handful of cofactors per q; some q (e.g. when only k = 2 fits) admit
    // no prime p at all.
    for (int attempt = 0; attempt < 64; ++attempt) {
      BigInt k = random_between(rng, k_lo, k_hi);
      if (k % 2 != 0) k += 1;
      if (k > k_hi) continue;
      BigInt p = k * q + 1;
      if (bit_length(p) != p_bits) continue;
      if (!is_probable_prime(p)) continue;
      try {
        return Group::make(p, q);
      } catch (const Error&) {
        continue;  // 7 landed in a proper subgroup; try another p
      }
    }
  }
}

Params Params::make(Group group, SecretPolynomial f1, SecretPolynomial f2, FieldElement w1,
                    FieldElement w2, FieldElement d1, FieldElement d2,
                    std::span<const FieldElement> roster_xs) {
  if (f1.threshold() != f2.threshold()) {
    throw Error(ErrorKind::kInvalidArgument, "both polynomials must share the threshold");
  }
  for (const auto& x : roster_xs) {
    if (x == w1 || x == w2) {
      throw Error(ErrorKind::kInvalidArgument, "evaluation point w_j collides with a member x");
    }
  }
  FieldElement s = d1 * f1.evaluate(w1) + d2 * f2.evaluate(w2);
  if (s.is_zero()) throw Error(ErrorKind::kInvalidArgument, "degenerate secret s = 0");
  FieldElement target = group.g.pow(s.residue());
  const auto t = f1.threshold();
  return Params{std::move(group), t, std::move(f1), std::move(f2), std::move(w1), std::move(w2),
                std::move(d1), std::move(d2), std::move(s), std::move(target)};
}

Setup harn_init(std::size_t t, std::size_t n, const Group& group, Rng& rng) {
  if (t < 1 || t > n) throw Error(ErrorKind::kInvalidArgument, "require 1 <= t <= n");
  const auto& q = group.q;
  if (BigInt(n) + 2 >= q.value()) {
    throw Error(ErrorKind::kInvalidArgument, "group size must leave room for w_1, w_2 below q");
  }
  const auto xs = default_abscissae(n, q);
  auto fresh_w = [&](const std::vector<FieldElement>& taken) {
    for (;;) {
      FieldElement w(random_below(rng, q.value()), q);
      if (std::none_of(taken.begin(), taken.end(), [&](const auto& x) { return x == w; })) return w;
    }
  };
  for (;;) {
    auto f1 = sample_polynomial(t, FieldElement(random_below(rng, q.value()), q), rng);
    auto f2 = sample_polynomial(t, FieldElement(random_below(rng, q.value()), q), rng);
    auto w1 = fresh_w(xs);
    auto w2 = fresh_w(xs);
    FieldElement d1(random_between(rng, 1, q.value() - 1), q);
    FieldElement d2(random_between(rng, 1, q.value() - 1), q);
    OpCounter scratch;
    CountingScope quiet(scratch);
    FieldElement s = d1 * f1.evaluate(w1) + d2 * f2.evaluate(w2);
    if (s.is_zero()) continue;
    Setup out{Params::make(group, f1, f2, w1, w2, d1, d2, xs), {}};
    for (std::size_t i = 0; i < n; ++i) {
      out.tokens.push_back(
          Token{"U" + std::to_string(i + 1), xs[i], f1.evaluate(xs[i]), f2.evaluate(xs[i])});
    }
    return out;
  }
}

FieldElement harn_contribution(const Token& token, std::span<const FieldElement> participants,
                               const Params& params) {
  if (participants.size() < params.threshold) {
    throw Error(ErrorKind::kBelowThreshold, "participant roster smaller than t");
  }
  if (std::none_of(participants.begin(), participants.end(),
                   [&](const auto& x) { return x == token.x; })) {
    throw Error(ErrorKind::kUnknownMember, "member '" + token.member_id + "' is not a participant");
  }
  const auto& q = params.group.q;
  auto term = [&](const FieldElement& w, const FieldElement& d, const FieldElement& fx) {
    FieldElement num = FieldElement::one(q);
    FieldElement den = FieldElement::one(q);
    for (const auto& xr : participants) {
      if (xr == token.x) continue;
      num *= w - xr;
      den *= token.x - xr;
    }
    return d * fx * num * den.inv();
  };
  return term(params.w1, params.d1, token.f1x) + term(params.w2, params.d2, token.f2x);
}

Release harn_release(const Token& token, std::span<const FieldElement> participants,
                     const Params& params) {
  const auto c = harn_contribution(token, participants, params);
  return Release{token.member_id, ladder_pow(params.group.g, c.residue(), bit_length(params.group.q.value()))};
}

bool harn_verify(std::span<const Release> released, const Params& params) {
  std::set<std::string> ids;
  for (const auto& r : released) {
    if (!ids.insert(r.member_id).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate release from " + r.member_id);
    }
  }
  if (released.size() < params.threshold) return false;
  FieldElement acc = released.front().e;
  for (std::size_t i = 1; i < released.size(); ++i) acc *= released[i].e;
  return acc == params.target;
}

wire::Message encode_release(const Release& release, std::uint32_t epoch, const Params& params) {
  wire::Writer w;
  w.blob16(to_bytes_be(release.e.residue(), params.group.p.byte_length()));
  return wire::Message{wire::MessageType::kHarnRelease, epoch, release.member_id, w.take()};
}

Release decode_release(const wire::Message& msg, const Params& params) {
  if (msg.type != wire::MessageType::kHarnRelease) throw Error(ErrorKind::kDecode, "not a harn release");
  wire::Reader r(msg.payload);
  auto e = from_bytes_be(r.blob16());
  r.expect_done();
  if (e >= params.group.p.value()) throw Error(ErrorKind::kDecode, "release out of range");
  return Release{msg.member_id, FieldElement(e, params.group.p)};
}

}  // namespace lwgas::harn
