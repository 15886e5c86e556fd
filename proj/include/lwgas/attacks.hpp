#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lwgas/sim.hpp"

namespace lwgas::attacks {

struct Finding {
  std::string case_name;
  std::string expected;
  std::string observed;
  bool matched = false;
};

struct AttackReport {
  std::string scenario;
  std::string claim;  // what the protocol is supposed to withstand or concede
  std::vector<Finding> findings;

  bool all_matched() const;
  std::string to_json() const;
};

struct CommonOptions {
  std::size_t m = 4;
  std::size_t t = 3;
  std::size_t n = 5;
  std::uint64_t seed = 1;
  std::string curve_ref = "builtin:secp160r1";
};

/// Replays a victim's recorded public share in a later session, with and
/// without credential rotation, plus a random-point forgery.
struct ReplayOptions : CommonOptions {
  std::string victim = "U2";
  bool rotate = false;  // only the rotated case when set; both when `both`
  bool both = true;
};
AttackReport replay_attack(const ReplayOptions& options);

/// Attackers broadcast a random point in their confirmation slot.
struct DosOptions : CommonOptions {
  enum class Mode { kCentralized, kDecentralized, kBoth };
  Mode mode = Mode::kBoth;
  std::size_t attackers = 1;
  DosOptions() { m = 5; t = 3; n = 5; }
};
AttackReport dos_invalid_share(const DosOptions& options);

/// The attacker holds a victim's share; optionally the group rotates
/// credentials excluding the victim. Also covers the threshold boundary by
/// enumeration on a tiny field.
struct CompromiseOptions : CommonOptions {
  std::string victim = "U1";
};
AttackReport node_compromise(const CompromiseOptions& options);

/// Byte-scan of honest transcripts for secret material, a leaky negative
/// control, the Harn transcript, and discrete-log search cost growth.
struct EavesdropOptions : CommonOptions {};
AttackReport eavesdrop_secrecy_check(const EavesdropOptions& options);

/// All members send to the verifier in the same window versus a staggered
/// schedule.
struct FloodingOptions {
  std::size_t m = 10;
  std::size_t buffer = 4;
  std::uint64_t seed = 1;
};
AttackReport verifier_flooding(const FloodingOptions& options);

/// Positions of every occurrence of `needle` in `haystack`.
std::vector<std::size_t> find_all(std::span<const std::uint8_t> haystack,
                                  std::span<const std::uint8_t> needle);

struct Leak {
  std::string secret;  // label of the secret found
  std::size_t frame = 0;
  std::size_t offset = 0;
};

/// Scans every frame for every labelled secret.
std::vector<Leak> scan_transcript(std::span<const sim::Frame> transcript,
                                  const std::vector<std::pair<std::string, Bytes>>& secrets);

/// Mean number of candidate scalars tried by exhaustive search to recover k
/// from kG, over every k in the subgroup of the given order on `curve`.
double mean_dlog_steps(const CurveParams& curve, const BigInt& subgroup_order);

/// Names accepted by run_by_name.
const std::vector<std::string>& scenario_names();
AttackReport run_by_name(const std::string& name, std::uint64_t seed);

}  // namespace lwgas::attacks
