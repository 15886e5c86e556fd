#include "lwgas/gas.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace lwgas {

namespace {

Bytes as_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

Bytes u32_bytes(std::uint32_t v) {
  return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
          static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

Bytes share_aad(std::uint32_t epoch, std::string_view sender, std::string_view recipient) {
  wire::Writer w;
  w.u32(epoch);
  w.blob16(as_bytes(sender));
  w.blob16(as_bytes(recipient));
  return w.take();
}

InitResult build_group(const SecretPolynomial& poly, std::vector<FieldElement> xs,
                       std::vector<std::string> ids, const CurveParams& curve,
                       std::string curve_ref, std::uint32_t epoch) {
  const auto& field = curve.scalar_field();
  if (!(poly.modulus() == field)) {
    throw Error(ErrorKind::kModulusMismatch,
                "share field must equal the curve's prime subgroup order");
  }
  if (poly.threshold() > xs.size()) {
    throw Error(ErrorKind::kInvalidArgument, "threshold exceeds group size");
  }
  InitResult out{GroupConfig{curve, std::move(curve_ref), curve.protocol_generator(),
                             CurvePoint::infinity(), commit(poly.secret()), poly.threshold(),
                             {}, std::string(crypto::kCipherSuite), epoch},
                 issue_shares(poly, xs, ids)};
  out.config.Q = scalar_mul(poly.secret().residue(), out.config.P, curve);
  for (const auto& s : out.shares) out.config.roster.push_back(RosterEntry{s.member_id, s.x});
  out.config.validate();
  return out;
}

// A zero share would publish the point at infinity, so the GM redraws until
// every roster member gets a usable one.
SecretPolynomial sample_group_polynomial(std::size_t t, std::span<const FieldElement> xs,
                                         Rng& rng) {
  const auto& field = xs.front().modulus();
  for (;;) {
    FieldElement s(random_between(rng, 1, field.value() - 1), field);
    auto poly = sample_polynomial(t, s, rng);
    if (std::none_of(xs.begin(), xs.end(),
                     [&](const FieldElement& x) { return poly.evaluate(x).is_zero(); })) {
      return poly;
    }
  }
}

void check_sizes(std::size_t t, std::size_t n, const CurveParams& curve) {
  if (t < 1 || t > n) {
    throw Error(ErrorKind::kInvalidArgument, "require 1 <= t <= n (t=" + std::to_string(t) +
                                                 ", n=" + std::to_string(n) + ")");
  }
  if (BigInt(n) >= curve.scalar_field().value()) {
    throw Error(ErrorKind::kInvalidArgument, "group size must be below the subgroup order");
  }
}

std::vector<std::string> resolve_ids(const InitOptions& options, std::size_t n) {
  if (options.member_ids.empty()) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("U" + std::to_string(i + 1));
    return ids;
  }
  if (options.member_ids.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "member id list does not match n");
  }
  std::set<std::string> unique(options.member_ids.begin(), options.member_ids.end());
  if (unique.size() != n) throw Error(ErrorKind::kInvalidArgument, "duplicate member id");
  return options.member_ids;
}

std::string resolve_ref(const InitOptions& options, const CurveParams& curve) {
  return options.curve_ref.empty() ? "builtin:" + curve.name() : options.curve_ref;
}

nlohmann::ordered_json point_json(const CurvePoint& p) {
  nlohmann::ordered_json j;
  j["x"] = to_decimal(p.x().residue());
  j["y"] = to_decimal(p.y().residue());
  return j;
}

CurvePoint point_from_json(const nlohmann::json& j, const CurveParams& curve) {
  CurvePoint p(FieldElement(parse_decimal(j.at("x").get<std::string>()), curve.modulus()),
               FieldElement(parse_decimal(j.at("y").get<std::string>()), curve.modulus()));
  if (!is_on_curve(p, curve)) throw Error(ErrorKind::kOffCurve, "config point off curve");
  return p;
}

crypto::Key rotation_key(const FieldElement& group_key, std::string_view member_id,
                         std::uint32_t epoch) {
  const auto s = group_key.to_bytes();
  const auto id = as_bytes(member_id);
  const auto ep = u32_bytes(epoch);
  return crypto::derive_key("lwgas/rotate/v1", {s, id, ep});
}

}  // namespace

// ---------------------------------------------------------------------------
// GroupConfig
// ---------------------------------------------------------------------------

void GroupConfig::validate() const {
  if (!is_on_curve(Q, curve) || Q.is_infinity()) {
    throw Error(ErrorKind::kOffCurve, "Q must be a finite curve point");
  }
  if (threshold < 1 || threshold > roster.size()) {
    throw Error(ErrorKind::kInvalidArgument, "threshold must be within 1..roster size");
  }
  std::set<BigInt> xs;
  std::set<std::string> ids;
  for (const auto& e : roster) {
    if (e.x.is_zero()) throw Error(ErrorKind::kInvalidArgument, "roster x must be nonzero");
    if (!xs.insert(e.x.residue()).second) throw Error(ErrorKind::kDuplicateX, "duplicate roster x");
    if (!ids.insert(e.member_id).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate member id " + e.member_id);
    }
  }
}

const RosterEntry& GroupConfig::member(const std::string& member_id) const {
  for (const auto& e : roster) {
    if (e.member_id == member_id) return e;
  }
  throw Error(ErrorKind::kUnknownMember, "unknown member '" + member_id + "'");
}

bool GroupConfig::has_member(const std::string& member_id) const {
  return std::any_of(roster.begin(), roster.end(),
                     [&](const RosterEntry& e) { return e.member_id == member_id; });
}

std::string GroupConfig::to_json() const {
  nlohmann::ordered_json j;
  j["curve_ref"] = curve_ref;
  j["P"] = point_json(P);
  j["Q"] = point_json(Q);
  j["H_s"] = to_hex(commitment.digest);
  j["t"] = threshold;
  auto roster_json = nlohmann::ordered_json::array();
  for (const auto& e : roster) {
    roster_json.push_back({{"member_id", e.member_id}, {"x", to_decimal(e.x.residue())}});
  }
  j["roster"] = roster_json;
  j["cipher_suite_id"] = cipher_suite_id;
  j["epoch"] = epoch;
  return j.dump(2);
}

GroupConfig GroupConfig::from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    const auto ref = j.at("curve_ref").get<std::string>();
    auto curve = load_curve(ref);
    GroupConfig cfg{curve, ref, point_from_json(j.at("P"), curve),
                    point_from_json(j.at("Q"), curve), {}, j.at("t").get<std::size_t>(),
                    {}, j.at("cipher_suite_id").get<std::string>(),
                    j.at("epoch").get<std::uint32_t>()};
    const auto digest = from_hex(j.at("H_s").get<std::string>());
    if (digest.size() != crypto::kDigestBytes) throw Error(ErrorKind::kDecode, "H_s has wrong length");
    std::copy(digest.begin(), digest.end(), cfg.commitment.digest.begin());
    for (const auto& e : j.at("roster")) {
      cfg.roster.push_back(RosterEntry{
          e.at("member_id").get<std::string>(),
          FieldElement(parse_decimal(e.at("x").get<std::string>()), curve.scalar_field())});
    }
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kDecode, std::string("group config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Initialization and confirmation
// ---------------------------------------------------------------------------

InitResult gm_init(std::size_t t, std::size_t n, const CurveParams& curve, Rng& rng,
                   const InitOptions& options) {
  check_sizes(t, n, curve);
  const auto& field = curve.scalar_field();
  auto xs = options.random_abscissae ? random_abscissae(n, field, rng) : default_abscissae(n, field);
  auto poly = sample_group_polynomial(t, xs, rng);
  return build_group(poly, std::move(xs), resolve_ids(options, n), curve,
                     resolve_ref(options, curve), 0);
}

InitResult gm_init_with_polynomial(const SecretPolynomial& poly, std::size_t n,
                                   const CurveParams& curve, const InitOptions& options) {
  check_sizes(poly.threshold(), n, curve);
  return build_group(poly, default_abscissae(n, curve.scalar_field()), resolve_ids(options, n),
                     curve, resolve_ref(options, curve), 0);
}

MemberState make_member_state(Share share, GroupConfig config) {
  if (!config.has_member(share.member_id)) {
    throw Error(ErrorKind::kUnknownMember, "share for unknown member '" + share.member_id + "'");
  }
  return MemberState{std::move(share), std::move(config), {}, {}, std::nullopt};
}

PublicShare PublicShare::make(std::string member_id, CurvePoint point, const CurveParams& curve) {
  if (point.is_infinity()) {
    throw Error(ErrorKind::kInfinityPoint, "public share is the point at infinity");
  }
  if (!is_on_curve(point, curve)) throw Error(ErrorKind::kOffCurve, "public share off curve");
  return PublicShare{std::move(member_id), std::move(point)};
}

PublicShare make_public_share(const Share& share, const GroupConfig& config) {
  return PublicShare::make(share.member_id, scalar_mul(share.y.residue(), config.P, config.curve),
                           config.curve);
}

PublicShare make_public_share(const MemberState& state) {
  return make_public_share(state.share, state.config);
}

bool CentralVerdict::all_valid() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.valid; });
}

std::vector<std::string> CentralVerdict::culprits() const {
  std::vector<std::string> out;
  for (const auto& v : verdicts) {
    if (!v.valid) out.push_back(v.member_id);
  }
  return out;
}

CentralVerdict gm_verify(const GroupConfig& config, std::span<const Share> gm_shares,
                         std::span<const PublicShare> received) {
  CentralVerdict out;
  for (const auto& ps : received) {
    auto it = std::find_if(gm_shares.begin(), gm_shares.end(),
                           [&](const Share& s) { return s.member_id == ps.member_id; });
    if (it == gm_shares.end() || !config.has_member(ps.member_id)) {
      throw Error(ErrorKind::kUnknownMember, "public share from unknown member '" + ps.member_id + "'");
    }
    const bool valid = is_on_curve(ps.point, config.curve) &&
                       scalar_mul(it->y.residue(), config.P, config.curve) == ps.point;
    out.verdicts.push_back(MemberVerdict{ps.member_id, valid});
  }
  return out;
}

bool decentralized_verify(const GroupConfig& config, std::span<const PublicShare> received,
                          std::size_t m) {
  if (m < config.threshold) {
    throw Error(ErrorKind::kBelowThreshold, "m must be equal or larger than t");
  }
  if (received.size() != m) {
    throw Error(ErrorKind::kInvalidArgument, "received share count does not match m");
  }
  std::vector<FieldElement> xs;
  std::set<std::string> seen;
  for (const auto& ps : received) {
    if (!seen.insert(ps.member_id).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate public share for " + ps.member_id);
    }
    xs.push_back(config.member(ps.member_id).x);
  }
  const auto coeffs = lagrange_coeffs_at_zero(xs);
  CurvePoint sum = CurvePoint::infinity();
  for (std::size_t i = 0; i < received.size(); ++i) {
    if (!is_on_curve(received[i].point, config.curve)) return false;
    auto c_i = scalar_mul(coeffs[i].residue(), received[i].point, config.curve);
    sum = add(sum, c_i, config.curve);
  }
  return sum == config.Q;
}

// ---------------------------------------------------------------------------
// Pairwise keys and key agreement
// ---------------------------------------------------------------------------

SymmetricKey derive_pairwise_key(const Share& own, const PublicShare& peer,
                                 const GroupConfig& config) {
  if (peer.point.is_infinity()) {
    throw Error(ErrorKind::kInfinityPoint, "peer public share is infinity");
  }
  const auto shared = scalar_mul(own.y.residue(), peer.point, config.curve);
  if (shared.is_infinity()) {
    throw Error(ErrorKind::kInfinityPoint, "shared point is infinity; re-key required");
  }
  const auto& lo = std::min(own.member_id, peer.member_id);
  const auto& hi = std::max(own.member_id, peer.member_id);
  const auto x = encode_x(shared);
  const auto lo_b = as_bytes(lo);
  const auto hi_b = as_bytes(hi);
  return SymmetricKey{crypto::derive_key("lwgas/pairwise/v1", {x, lo_b, hi_b})};
}

void derive_pairwise_keys(MemberState& state) {
  for (const auto& [id, ps] : state.received_public_shares) {
    if (id == state.share.member_id || state.pairwise_keys.count(id) != 0) continue;
    state.pairwise_keys.emplace(id, derive_pairwise_key(state.share, ps, state.config));
  }
}

wire::Message EncryptedShare::to_message() const {
  wire::Writer w;
  w.raw(nonce);
  w.blob16(sealed);
  return wire::Message{wire::MessageType::kEncryptedShare, epoch, sender, w.take()};
}

EncryptedShare EncryptedShare::from_message(const wire::Message& msg, std::string recipient) {
  if (msg.type != wire::MessageType::kEncryptedShare) {
    throw Error(ErrorKind::kDecode, "not an encrypted-share message");
  }
  wire::Reader r(msg.payload);
  EncryptedShare out;
  out.sender = msg.member_id;
  out.recipient = std::move(recipient);
  out.epoch = msg.epoch;
  auto n = r.raw(crypto::kNonceBytes);
  std::copy(n.begin(), n.end(), out.nonce.begin());
  auto ct = r.blob16();
  out.sealed.assign(ct.begin(), ct.end());
  r.expect_done();
  return out;
}

std::vector<EncryptedShare> seal_share_for_peers(const MemberState& state, Rng& rng) {
  std::vector<EncryptedShare> out;
  const auto plaintext = state.share.y.to_bytes();
  for (const auto& [peer, key] : state.pairwise_keys) {
    EncryptedShare e;
    e.sender = state.share.member_id;
    e.recipient = peer;
    e.epoch = state.config.epoch;
    e.nonce = crypto::random_nonce(rng);
    e.sealed = crypto::seal(key.bytes, e.nonce, plaintext, share_aad(e.epoch, e.sender, peer));
    out.push_back(std::move(e));
  }
  return out;
}

const char* to_string(KeyAgreementResult::Status status) {
  using S = KeyAgreementResult::Status;
  switch (status) {
    case S::kRecovered: return "recovered";
    case S::kTagFailure: return "tag-failure";
    case S::kCommitmentMismatch: return "commitment-mismatch";
    case S::kBelowThreshold: return "below-threshold";
    case S::kUnknownPeer: return "unknown-peer";
  }
  return "unknown";
}

KeyAgreementResult key_agreement_round(MemberState& state,
                                       std::span<const EncryptedShare> incoming) {
  using S = KeyAgreementResult::Status;
  KeyAgreementResult result;
  std::vector<Share> shares{state.share};
  std::set<std::string> seen{state.share.member_id};
  for (const auto& msg : incoming) {
    if (msg.recipient != state.share.member_id) continue;
    if (!seen.insert(msg.sender).second) continue;
    auto key = state.pairwise_keys.find(msg.sender);
    if (key == state.pairwise_keys.end() || !state.config.has_member(msg.sender)) {
      result.status = S::kUnknownPeer;
      result.offending.push_back(msg.sender);
      continue;
    }
    try {
      const auto plain = crypto::open(key->second.bytes, msg.nonce, msg.sealed,
                                      share_aad(msg.epoch, msg.sender, msg.recipient));
      if (msg.epoch != state.config.epoch || plain.size() != state.share.y.modulus().byte_length()) {
        throw Error(ErrorKind::kTagFailure, "malformed share plaintext");
      }
      const auto& field = state.share.y.modulus();
      shares.push_back(Share{state.config.member(msg.sender).x,
                             FieldElement(from_bytes_be(plain), field), msg.sender});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kTagFailure) throw;
      result.status = S::kTagFailure;
      result.offending.push_back(msg.sender);
    }
  }
  if (!result.offending.empty()) return result;
  if (shares.size() < state.config.threshold) {
    result.status = S::kBelowThreshold;
    return result;
  }
  auto candidate = reconstruct(shares, state.config.threshold);
  if (!verify_commitment(candidate, state.config.commitment)) {
    result.status = S::kCommitmentMismatch;
    return result;
  }
  result.status = S::kRecovered;
  result.group_key = candidate;
  state.group_key = candidate;
  return result;
}

// ---------------------------------------------------------------------------
// Credential rotation
// ---------------------------------------------------------------------------

RotationResult rotate_credentials(const GroupConfig& config, const FieldElement& group_key,
                                  Rng& rng, std::span<const std::string> exclude) {
  if (!verify_commitment(group_key, config.commitment)) {
    throw Error(ErrorKind::kInvalidArgument, "rotation requires the current group key");
  }
  std::vector<FieldElement> xs;
  std::vector<std::string> ids;
  for (const auto& e : config.roster) {
    if (std::find(exclude.begin(), exclude.end(), e.member_id) != exclude.end()) continue;
    xs.push_back(e.x);
    ids.push_back(e.member_id);
  }
  check_sizes(config.threshold, ids.size(), config.curve);
  auto poly = sample_group_polynomial(config.threshold, xs, rng);
  auto group = build_group(poly, std::move(xs), std::move(ids), config.curve, config.curve_ref,
                           config.epoch + 1);
  RotationResult out{std::move(group.config), std::move(group.shares), {}};
  for (const auto& share : out.shares) {
    RotationEntry entry{share.member_id, crypto::random_nonce(rng), {}};
    auto plaintext = share.x.to_bytes();
    const auto y = share.y.to_bytes();
    plaintext.insert(plaintext.end(), y.begin(), y.end());
    entry.sealed = crypto::seal(rotation_key(group_key, share.member_id, out.config.epoch),
                                entry.nonce, plaintext,
                                share_aad(out.config.epoch, "GM", share.member_id));
    out.bundle.push_back(std::move(entry));
  }
  return out;
}

Share accept_rotation(const FieldElement& group_key, const GroupConfig& new_config,
                      const RotationEntry& entry) {
  const auto plain =
      crypto::open(rotation_key(group_key, entry.member_id, new_config.epoch), entry.nonce,
                   entry.sealed, share_aad(new_config.epoch, "GM", entry.member_id));
  const auto& field = new_config.share_field();
  const auto width = field.byte_length();
  if (plain.size() != 2 * width) throw Error(ErrorKind::kDecode, "rotation payload size");
  const std::span<const std::uint8_t> view(plain);
  return Share{FieldElement(from_bytes_be(view.first(width)), field),
               FieldElement(from_bytes_be(view.subspan(width)), field), entry.member_id};
}

// ---------------------------------------------------------------------------
// Wire codecs
// ---------------------------------------------------------------------------

wire::Message encode_public_share(const PublicShare& share, const GroupConfig& config) {
  wire::Writer w;
  w.blob16(share.point.x().to_bytes());
  w.blob16(share.point.y().to_bytes());
  return wire::Message{wire::MessageType::kPublicShare, config.epoch, share.member_id, w.take()};
}

PublicShare decode_public_share(const wire::Message& msg, const CurveParams& curve) {
  if (msg.type != wire::MessageType::kPublicShare) {
    throw Error(ErrorKind::kDecode, "not a public-share message");
  }
  wire::Reader r(msg.payload);
  auto x = from_bytes_be(r.blob16());
  auto y = from_bytes_be(r.blob16());
  r.expect_done();
  if (x >= curve.modulus().value() || y >= curve.modulus().value()) {
    throw Error(ErrorKind::kDecode, "coordinate out of range");
  }
  return PublicShare::make(msg.member_id,
                           CurvePoint(FieldElement(x, curve.modulus()), FieldElement(y, curve.modulus())),
                           curve);
}

}  // namespace lwgas
