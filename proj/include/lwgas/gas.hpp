#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lwgas/crypto.hpp"
#include "lwgas/ec.hpp"
#include "lwgas/sss.hpp"
#include "lwgas/wire.hpp"

namespace lwgas {

struct RosterEntry {
  std::string member_id;
  FieldElement x;

  friend bool operator==(const RosterEntry&, const RosterEntry&) = default;
};

/// Everything the group manager publishes. The secret itself is not kept.
struct GroupConfig {
  CurveParams curve;
  std::string curve_ref;  // "builtin:<name>" or a file path
  CurvePoint P;
  CurvePoint Q;           // s * P
  SecretCommitment commitment;
  std::size_t threshold = 0;
  std::vector<RosterEntry> roster;
  std::string cipher_suite_id{crypto::kCipherSuite};
  std::uint32_t epoch = 0;

  /// Throws on a broken invariant (Q off curve, duplicate/zero x, t > n).
  void validate() const;
  const RosterEntry& member(const std::string& member_id) const;
  bool has_member(const std::string& member_id) const;
  const Prime& share_field() const { return curve.scalar_field(); }

  std::string to_json() const;
  /// Resolves `curve_ref` through load_curve().
  static GroupConfig from_json(std::string_view text);
};

struct PublicShare {
  std::string member_id;
  CurvePoint point;

  /// Rejects off-curve points and infinity.
  static PublicShare make(std::string member_id, CurvePoint point, const CurveParams& curve);
  friend bool operator==(const PublicShare&, const PublicShare&) = default;
};

struct SymmetricKey {
  crypto::Key bytes{};
  friend bool operator==(const SymmetricKey&, const SymmetricKey&) = default;
};

struct MemberState {
  Share share;
  GroupConfig config;
  std::map<std::string, PublicShare> received_public_shares;
  std::map<std::string, SymmetricKey> pairwise_keys;
  std::optional<FieldElement> group_key;
};

struct InitOptions {
  bool random_abscissae = false;
  std::vector<std::string> member_ids;  // empty: U1..Un
  std::string curve_ref;                // recorded in the config; defaults to builtin:<name>
};

struct InitResult {
  GroupConfig config;
  std::vector<Share> shares;  // delivered out of band, one per member
};

/// Group manager setup: sample f of degree t-1 with f(0) = s, issue n
/// shares, publish Q = sP and H(s).
InitResult gm_init(std::size_t t, std::size_t n, const CurveParams& curve, Rng& rng,
                   const InitOptions& options = {});

/// Same as gm_init but with a caller-chosen polynomial (for tests and
/// deterministic rotation).
InitResult gm_init_with_polynomial(const SecretPolynomial& poly, std::size_t n,
                                   const CurveParams& curve, const InitOptions& options = {});

MemberState make_member_state(Share share, GroupConfig config);

/// f(x_i) * P: the member's whole authentication computation (one scalar
/// multiplication). Throws kInfinityPoint for a zero share.
PublicShare make_public_share(const MemberState& state);
PublicShare make_public_share(const Share& share, const GroupConfig& config);

struct MemberVerdict {
  std::string member_id;
  bool valid = false;
};

struct CentralVerdict {
  std::vector<MemberVerdict> verdicts;
  bool all_valid() const;
  std::vector<std::string> culprits() const;
};

/// Centralized confirmation: the GM recomputes f(x_i) P for each received
/// public share. Throws kUnknownMember for ids outside `gm_shares`.
CentralVerdict gm_verify(const GroupConfig& config, std::span<const Share> gm_shares,
                         std::span<const PublicShare> received);

/// Decentralized confirmation: sum_i L_i(0) (f(x_i) P) == Q over the m
/// received shares. Throws kBelowThreshold when m < t and kUnknownMember for
/// ids outside the roster.
bool decentralized_verify(const GroupConfig& config, std::span<const PublicShare> received,
                          std::size_t m);

/// K = KDF(x(y_own * peer.point) | sorted member ids). Throws kInfinityPoint
/// if the shared point is infinity.
SymmetricKey derive_pairwise_key(const Share& own, const PublicShare& peer,
                                 const GroupConfig& config);

/// Derives keys for every received peer share not already keyed.
void derive_pairwise_keys(MemberState& state);

struct EncryptedShare {
  std::string sender;
  std::string recipient;
  std::uint32_t epoch = 0;
  crypto::Nonce nonce{};
  Bytes sealed;  // ciphertext || tag

  wire::Message to_message() const;
  static EncryptedShare from_message(const wire::Message& msg, std::string recipient);
};

/// E_K[f(x_i)] for every peer with a pairwise key; fresh nonce per message.
std::vector<EncryptedShare> seal_share_for_peers(const MemberState& state, Rng& rng);

struct KeyAgreementResult {
  enum class Status { kRecovered, kTagFailure, kCommitmentMismatch, kBelowThreshold, kUnknownPeer };
  Status status = Status::kBelowThreshold;
  std::optional<FieldElement> group_key;
  std::vector<std::string> offending;  // peers whose ciphertext failed

  bool ok() const { return status == Status::kRecovered; }
};

const char* to_string(KeyAgreementResult::Status status);

/// Decrypts the incoming shares addressed to this member, interpolates s'
/// over own + peers, and accepts iff H(s') == H(s). On success sets
/// state.group_key. No partial key is ever stored on failure.
KeyAgreementResult key_agreement_round(MemberState& state,
                                       std::span<const EncryptedShare> incoming);

struct RotationEntry {
  std::string member_id;
  crypto::Nonce nonce{};
  Bytes sealed;
};

struct RotationResult {
  GroupConfig config;
  std::vector<Share> shares;  // retained by the GM
  std::vector<RotationEntry> bundle;
};

/// Fresh polynomial and shares for the roster minus `exclude`, each new share
/// encrypted under a key derived from the current group key. Epoch + 1.
RotationResult rotate_credentials(const GroupConfig& config, const FieldElement& group_key,
                                  Rng& rng, std::span<const std::string> exclude = {});

/// Member side of rotation. Throws kTagFailure with the wrong group key.
Share accept_rotation(const FieldElement& group_key, const GroupConfig& new_config,
                      const RotationEntry& entry);

// Wire codecs for confirmation messages.
wire::Message encode_public_share(const PublicShare& share, const GroupConfig& config);
PublicShare decode_public_share(const wire::Message& msg, const CurveParams& curve);

}  // namespace lwgas
