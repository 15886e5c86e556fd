#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lwgas/cost_model.hpp"
#include "lwgas/gas.hpp"
#include "lwgas/harn.hpp"

namespace lwgas::sim {

enum class Scheme { kHarn, kProposedCentralized, kProposedDecentralized };
enum class VerifierPolicy { kGm, kFixed, kMaxBattery };
enum class SendSchedule { kSimultaneous, kStaggered };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);
std::string_view to_string(VerifierPolicy policy);
VerifierPolicy parse_verifier_policy(std::string_view name);

/// Per-node compute throughput (reference-field multiplications per second),
/// fitted once so that the proposed scheme with a group manager and ten
/// members authenticates in 1.3 s on the default scenario.
inline constexpr double kCalibratedComputeRate = 10063.9897074756;
/// Joules per reference-field multiplication, fitted once so that one member
/// of that same run spends 0.014 J.
inline constexpr double kCalibratedJoulesPerTmulq = 1.16281850294365e-05;

/// Charge for a block of counted work, in reference-field multiplications:
/// one scalar multiplication costs 1189, other multiplications their modulus
/// weight.
std::uint64_t tmulq_charge(const OpCounter& ops);

struct Scenario {
  Scheme scheme = Scheme::kProposedCentralized;
  std::size_t m = 10;  // participating members
  std::size_t t = 0;   // 0 means t = m
  std::size_t n = 0;   // roster size, 0 means n = m
  double bitrate_bps = 1e6;
  double compute_rate = kCalibratedComputeRate;
  double gm_compute_rate = 0.0;  // 0 means same as members
  double joules_per_tmulq = kCalibratedJoulesPerTmulq;
  cost::RadioCosts radio{4.0e-7, 3.2e-7};
  double loss_probability = 0.0;
  std::uint64_t seed = 1;
  std::string curve_ref = "builtin:secp160r1";
  std::string harn_group = "fixture";  // "fixture" or "tiny"
  std::optional<VerifierPolicy> verifier_policy;  // default: gm, or max-battery when decentralized
  std::string fixed_verifier;
  std::vector<double> battery;  // per member, empty: drawn from the seed
  SendSchedule schedule = SendSchedule::kSimultaneous;
  double stagger_gap_s = 0.0;  // 0 means one verifier scalar multiplication
  std::size_t verifier_queue_capacity = 0;  // 0 means unbounded
  bool exclude_culprits = true;
  bool key_agreement = false;
  std::size_t max_restarts = 3;
  double round_timeout_s = 600.0;
  bool record_events = false;
  bool record_transcript = false;

  std::size_t threshold() const { return t == 0 ? m : t; }
  std::size_t roster_size() const { return n == 0 ? m : n; }
  VerifierPolicy policy() const;

  /// Every problem found, not just the first.
  std::vector<std::string> validate() const;
  std::string to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static Scenario from_json(std::string_view text);
};

struct NodeState {
  std::string member_id;
  double battery = 0.0;
};

/// gm -> "GM"; fixed -> `fixed_id`; max-battery -> argmax, ties to the lowest
/// member id in natural order (U2 before U10). Throws on an empty group.
std::string select_verifier(VerifierPolicy policy, std::span<const NodeState> nodes,
                            std::string_view fixed_id = {});

/// Natural order on member ids: shorter numeric suffixes first.
bool member_id_less(std::string_view a, std::string_view b);

struct Frame {
  double time = 0.0;
  std::string sender;
  std::string recipient;  // empty for broadcast
  Bytes bytes;
};

struct LogEvent {
  double time = 0.0;
  std::string node;
  std::string what;
};

struct NodeReport {
  std::string member_id;
  bool is_gm = false;
  bool is_verifier = false;
  bool adversarial = false;
  std::uint64_t tmulq_count = 0;
  OpCounter ops;
  double compute_j = 0.0;
  double radio_j = 0.0;
  double total_j = 0.0;
  std::uint64_t bytes_tx = 0;
  std::uint64_t bytes_rx = 0;
  std::uint64_t messages = 0;  // sent + received
  double battery = 0.0;
};

struct Outcome {
  bool authenticated = false;
  std::string reason;  // empty when authenticated
};

struct KeyAgreementReport {
  bool attempted = false;
  double completion_time = 0.0;
  std::map<std::string, std::string> member_status;  // id -> status string
  std::map<std::string, std::vector<std::string>> offending;  // id -> peers blamed
  bool all_recovered = false;
  bool keys_identical = false;
};

struct SimReport {
  Scheme scheme{};
  std::size_t m = 0;
  std::size_t t = 0;
  Outcome outcome;
  double auth_time = 0.0;
  std::size_t rounds = 0;
  std::vector<std::string> excluded;  // culprits removed by the group manager
  std::vector<std::string> rejected;  // frames from ids outside the roster
  std::string verifier_id;
  std::size_t max_verifier_queue = 0;
  std::size_t dropped_at_verifier = 0;
  double mean_share_latency = 0.0;
  std::uint64_t channel_bytes_offered = 0;    // frame bytes x intended receivers
  std::uint64_t channel_bytes_delivered = 0;
  std::vector<NodeReport> nodes;
  KeyAgreementReport key_agreement;
  std::vector<Frame> transcript;
  std::vector<LogEvent> events;

  /// Mean over honest members that are not the verifier (falls back to all
  /// honest members when every member verifies).
  NodeReport typical_member() const;
  cost::CsvRow csv_row() const;
  std::string to_json(bool include_events) const;
};

/// View of a run handed to adversaries.
struct RunView {
  const GroupConfig* config = nullptr;
  std::size_t round = 0;
  const std::map<std::string, PublicShare>* public_shares_seen = nullptr;
};

/// Active or passive attacker plugged into a run. Controlled slots are
/// member ids whose transmissions come from the adversary instead of an
/// honest node.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual bool controls(std::string_view member_id) const { (void)member_id; return false; }
  /// Extra ids, outside the participating set, that also transmit during
  /// confirmation.
  virtual std::vector<std::string> intruders() const { return {}; }
  /// Confirmation-stage message from a controlled slot; nullopt stays silent.
  virtual std::optional<wire::Message> confirmation(std::string_view member_id, const RunView& view,
                                                    Rng& rng) {
    (void)member_id; (void)view; (void)rng;
    return std::nullopt;
  }
  /// Key-agreement messages from a controlled slot.
  virtual std::vector<EncryptedShare> key_agreement(std::string_view member_id,
                                                    std::span<const std::string> peers,
                                                    const RunView& view, Rng& rng) {
    (void)member_id; (void)peers; (void)view; (void)rng;
    return {};
  }
  /// Key-agreement messages addressed to a controlled slot.
  virtual void deliver(const EncryptedShare& msg) { (void)msg; }
  /// Every frame put on the air.
  virtual void observe(const Frame& frame) { (void)frame; }
};

/// Group material for a run. Built from the scenario when not supplied.
struct GroupSetup {
  GroupConfig config;
  std::vector<Share> shares;
};

/// Deterministic discrete-event run of one authentication session. `group`
/// is used by the proposed schemes, `harn_setup` by Harn.
SimReport run(const Scenario& scenario, Adversary* adversary = nullptr,
              const std::optional<GroupSetup>& group = std::nullopt,
              const harn::Setup* harn_setup = nullptr);

/// One run per (scheme, m), seeds derived from base.seed, m, and scheme.
std::vector<SimReport> sweep(std::span<const Scheme> schemes, std::span<const std::size_t> ms,
                             const Scenario& base, unsigned jobs = 1);

/// Compute rate that makes `base` authenticate in `target_seconds`.
double calibrate_compute_rate(const Scenario& base, double target_seconds);
/// Joules per multiplication that makes the typical member of `base` spend
/// `target_joules`.
double calibrate_joules_per_tmulq(const Scenario& base, double target_joules);

/// Builtin presets: "paper-fig3" (m = 10) and "paper-fig4" (m = 50), each the
/// three simulated schemes.
std::vector<Scenario> preset(std::string_view name);

void write_csv(std::ostream& out, std::span<const SimReport> reports);

}  // namespace lwgas::sim
