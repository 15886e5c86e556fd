#include "lwgas/attacks.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace lwgas::attacks {

using nlohmann::json;

bool AttackReport::all_matched() const {
  return std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.matched; });
}

std::string AttackReport::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["claim"] = claim;
  json list = json::array();
  for (const auto& f : findings)
    list.push_back({{"case", f.case_name},
                    {"expected", f.expected},
                    {"observed", f.observed},
                    {"matched", f.matched}});
  j["findings"] = std::move(list);
  j["all_matched"] = all_matched();
  return j.dump(2);
}

std::vector<std::size_t> find_all(std::span<const std::uint8_t> haystack,
                                  std::span<const std::uint8_t> needle) {
  std::vector<std::size_t> hits;
  if (needle.empty() || needle.size() > haystack.size()) return hits;
  auto it = haystack.begin();
  while (true) {
    it = std::search(it, haystack.end(), needle.begin(), needle.end());
    if (it == haystack.end()) break;
    hits.push_back(static_cast<std::size_t>(it - haystack.begin()));
    ++it;
  }
  return hits;
}

std::vector<Leak> scan_transcript(std::span<const sim::Frame> transcript,
                                  const std::vector<std::pair<std::string, Bytes>>& secrets) {
  std::vector<Leak> leaks;
  for (std::size_t f = 0; f < transcript.size(); ++f) {
    for (const auto& [label, bytes] : secrets) {
      for (auto off : find_all(transcript[f].bytes, bytes)) leaks.push_back({label, f, off});
    }
  }
  return leaks;
}

double mean_dlog_steps(const CurveParams& curve, const BigInt& subgroup_order) {
  if (subgroup_order < 2 || curve.order() % subgroup_order != 0)
    throw Error(ErrorKind::kInvalidArgument, "subgroup order must divide the curve order");
  OpCounter scratch;
  CountingScope quiet(scratch);
  const auto g = scalar_mul(curve.order() / subgroup_order, curve.generator(), curve);
  const auto r = static_cast<std::uint64_t>(subgroup_order);
  // Targets k*G for every nonzero k; one exhaustive walk finds them all.
  std::map<std::pair<BigInt, BigInt>, std::uint64_t> pending;
  for (std::uint64_t k = 1; k < r; ++k) {
    const auto pt = scalar_mul(k, g, curve);
    pending[{pt.x().residue(), pt.y().residue()}] = k;
  }
  double total = 0;
  std::uint64_t found = 0;
  auto acc = g;
  for (std::uint64_t step = 1; step < r && !pending.empty(); ++step) {
    auto it = pending.find({acc.x().residue(), acc.y().residue()});
    if (it != pending.end()) {
      total += static_cast<double>(step);
      ++found;
      pending.erase(it);
    }
    acc = add(acc, g, curve);
  }
  return found ? total / static_cast<double>(found) : 0.0;
}

namespace {

sim::GroupSetup make_group(const CommonOptions& o, Rng& rng) {
  const auto curve = load_curve(o.curve_ref);
  OpCounter scratch;
  CountingScope quiet(scratch);
  InitOptions io;
  io.curve_ref = o.curve_ref;
  auto init = gm_init(o.t, o.n, curve, rng, io);
  return {std::move(init.config), std::move(init.shares)};
}

sim::Scenario base_scenario(const CommonOptions& o, std::uint64_t salt) {
  sim::Scenario sc;
  sc.scheme = sim::Scheme::kProposedCentralized;
  sc.m = o.m;
  sc.t = o.t;
  sc.n = o.n;
  sc.seed = o.seed * 1000 + salt;
  sc.curve_ref = o.curve_ref;
  sc.key_agreement = true;
  sc.record_transcript = true;
  return sc;
}

const Share& share_of(const sim::GroupSetup& g, const std::string& id) {
  for (const auto& s : g.shares)
    if (s.member_id == id) return s;
  throw Error(ErrorKind::kUnknownMember, id);
}

FieldElement group_key(const sim::GroupSetup& g) {
  OpCounter scratch;
  CountingScope quiet(scratch);
  return reconstruct(g.shares, g.config.threshold);
}

std::string outcome_text(const sim::SimReport& r) {
  std::string s = r.outcome.authenticated ? "authenticated" : "failed(" + r.outcome.reason + ")";
  s += ", rounds=" + std::to_string(r.rounds);
  if (!r.excluded.empty()) {
    s += ", excluded=";
    for (std::size_t i = 0; i < r.excluded.size(); ++i) s += (i ? "," : "") + r.excluded[i];
  }
  if (!r.rejected.empty()) {
    s += ", rejected=";
    for (std::size_t i = 0; i < r.rejected.size(); ++i) s += (i ? "," : "") + r.rejected[i];
  }
  return s;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

/// Stands in for `slot`, either replaying a recorded confirmation message or
/// computing one from a credential it holds (stolen or guessed).
class Impersonator : public sim::Adversary {
 public:
  Impersonator(std::string slot, bool intruder) : slot_(std::move(slot)), intruder_(intruder) {}

  std::optional<wire::Message> replay;
  std::optional<Share> credential;
  std::optional<MemberState> state;  // built during key agreement
  std::vector<EncryptedShare> inbox;

  bool controls(std::string_view id) const override { return !intruder_ && id == slot_; }
  std::vector<std::string> intruders() const override {
    return intruder_ ? std::vector<std::string>{slot_} : std::vector<std::string>{};
  }

  std::optional<wire::Message> confirmation(std::string_view, const sim::RunView& view,
                                            Rng&) override {
    if (replay) {
      auto msg = *replay;
      msg.epoch = view.config->epoch;  // the epoch field is not authenticated
      return msg;
    }
    if (credential) return encode_public_share(make_public_share(*credential, *view.config), *view.config);
    return std::nullopt;
  }

  std::vector<EncryptedShare> key_agreement(std::string_view, std::span<const std::string> peers,
                                            const sim::RunView& view, Rng& rng) override {
    Share own = credential ? *credential : guessed_share(*view.config, rng);
    state = make_member_state(own, *view.config);
    for (const auto& [id, ps] : *view.public_shares_seen)
      if (id != slot_ && std::find(peers.begin(), peers.end(), id) != peers.end())
        state->received_public_shares.insert_or_assign(id, ps);
    derive_pairwise_keys(*state);
    return seal_share_for_peers(*state, rng);
  }

  void deliver(const EncryptedShare& msg) override { inbox.push_back(msg); }

  std::optional<KeyAgreementResult> finish() {
    if (!state) return std::nullopt;
    return key_agreement_round(*state, inbox);
  }

 private:
  Share guessed_share(const GroupConfig& config, Rng& rng) const {
    const auto& q = config.share_field();
    const auto& x = config.member(slot_).x;
    return Share{x, FieldElement(random_between(rng, 1, q.value() - 1), q), slot_};
  }

  std::string slot_;
  bool intruder_;
};

/// Broadcasts a random curve point in each controlled slot.
class RandomPointSender : public sim::Adversary {
 public:
  explicit RandomPointSender(std::vector<std::string> slots) : slots_(std::move(slots)) {}
  bool controls(std::string_view id) const override {
    return std::find(slots_.begin(), slots_.end(), id) != slots_.end();
  }
  std::optional<wire::Message> confirmation(std::string_view id, const sim::RunView& view,
                                            Rng& rng) override {
    const auto& cfg = *view.config;
    const auto k = random_between(rng, 1, cfg.curve.scalar_order() - 1);
    auto pt = scalar_mul(k, cfg.P, cfg.curve);
    return encode_public_share(PublicShare::make(std::string(id), pt, cfg.curve), cfg);
  }

 private:
  std::vector<std::string> slots_;
};

/// A faulty member that broadcasts its private share in the clear.
class LeakyMember : public sim::Adversary {
 public:
  explicit LeakyMember(Share share) : share_(std::move(share)) {}
  bool controls(std::string_view id) const override { return id == share_.member_id; }
  std::optional<wire::Message> confirmation(std::string_view, const sim::RunView& view,
                                            Rng&) override {
    return wire::Message{wire::MessageType::kPublicShare, view.config->epoch, share_.member_id,
                         share_.y.to_bytes()};
  }

 private:
  Share share_;
};

std::optional<wire::Message> recorded_share(const sim::SimReport& r, const std::string& id) {
  for (const auto& f : r.transcript) {
    if (f.sender != id) continue;
    auto msg = wire::decode(f.bytes);
    if (msg.type == wire::MessageType::kPublicShare) return msg;
  }
  return std::nullopt;
}

}  // namespace

AttackReport replay_attack(const ReplayOptions& o) {
  AttackReport rep;
  rep.scenario = "replay";
  rep.claim = "a recorded public share cannot be used to join key agreement, and rotation "
              "invalidates it outright";
  Rng rng(o.seed);
  auto group = make_group(o, rng);
  auto sc = base_scenario(o, 1);

  const auto honest = sim::run(sc, nullptr, group);
  auto recorded = recorded_share(honest, o.victim);
  rep.findings.push_back({"recording session", "authenticated, victim share on the air",
                          outcome_text(honest) + (recorded ? ", recorded" : ", nothing recorded"),
                          honest.outcome.authenticated && recorded.has_value()});
  if (!recorded) return rep;

  if (o.both || !o.rotate) {
    Impersonator adv(o.victim, false);
    adv.replay = recorded;
    sc.seed = o.seed * 1000 + 2;
    const auto r = sim::run(sc, &adv, group);
    rep.findings.push_back({"no rotation: confirmation", "authenticated (replayed share accepted)",
                            outcome_text(r), r.outcome.authenticated && r.excluded.empty()});
    const auto attacker = adv.finish();
    std::size_t blamed = 0, recovered = 0;
    for (const auto& [id, status] : r.key_agreement.member_status) {
      if (status == "recovered") ++recovered;
      auto it = r.key_agreement.offending.find(id);
      if (it != r.key_agreement.offending.end() && contains(it->second, o.victim)) ++blamed;
    }
    const bool attacker_failed = attacker && !attacker->ok();
    rep.findings.push_back(
        {"no rotation: key agreement",
         "attacker fails to decrypt; every honest member rejects the replayed identity",
         std::string("attacker ") + (attacker ? to_string(attacker->status) : "silent") + ", " +
             std::to_string(blamed) + "/" + std::to_string(r.key_agreement.member_status.size()) +
             " honest members blame " + o.victim + ", " + std::to_string(recovered) + " recovered",
         attacker_failed && recovered == 0 && blamed == r.key_agreement.member_status.size() &&
             blamed > 0});
  }

  if (o.both || o.rotate) {
    Rng rot_rng(o.seed + 7);
    auto rotated = rotate_credentials(group.config, group_key(group), rot_rng);
    sim::GroupSetup next{rotated.config, rotated.shares};
    const auto old_point = decode_public_share(*recorded, group.config.curve);
    bool direct = true;
    {
      OpCounter scratch;
      CountingScope quiet(scratch);
      const PublicShare one[] = {old_point};
      direct = gm_verify(next.config, next.shares, one).all_valid();
    }
    Impersonator adv(o.victim, false);
    adv.replay = recorded;
    auto sc2 = sc;
    sc2.seed = o.seed * 1000 + 3;
    sc2.key_agreement = false;
    const auto r = sim::run(sc2, &adv, next);
    rep.findings.push_back({"rotation: confirmation",
                            "replayed share rejected by the group manager",
                            std::string("gm_verify ") + (direct ? "true" : "false") + "; " +
                                outcome_text(r),
                            !direct && contains(r.excluded, o.victim)});
  }

  if (o.both) {
    RandomPointSender adv({o.victim});
    auto sc3 = sc;
    sc3.seed = o.seed * 1000 + 4;
    sc3.key_agreement = false;
    const auto r = sim::run(sc3, &adv, group);
    rep.findings.push_back({"random point", "rejected", outcome_text(r), contains(r.excluded, o.victim)});
  }
  return rep;
}

AttackReport dos_invalid_share(const DosOptions& o) {
  AttackReport rep;
  rep.scenario = "dos-invalid-share";
  rep.claim = "one invalid share denies decentralized authentication; the group manager "
              "can single it out";
  if (o.attackers > o.m) throw Error(ErrorKind::kInvalidArgument, "more attackers than members");
  Rng rng(o.seed);
  auto group = make_group(o, rng);
  std::vector<std::string> slots;
  for (std::size_t k = 0; k < o.attackers; ++k) slots.push_back(group.config.roster[o.m - 1 - k].member_id);

  auto run_mode = [&](sim::Scheme scheme, std::uint64_t salt) {
    auto sc = base_scenario(o, salt);
    sc.scheme = scheme;
    sc.key_agreement = false;
    sc.record_transcript = false;
    RandomPointSender adv(slots);
    return sim::run(sc, o.attackers ? &adv : nullptr, group);
  };

  const bool both = o.mode == DosOptions::Mode::kBoth;
  if (both || o.mode == DosOptions::Mode::kDecentralized) {
    const auto r = run_mode(sim::Scheme::kProposedDecentralized, 1);
    if (o.attackers == 0) {
      rep.findings.push_back({"decentralized, no attacker", "authenticated", outcome_text(r),
                              r.outcome.authenticated});
    } else {
      rep.findings.push_back({"decentralized", "failed(denial-of-authentication) after every retry",
                              outcome_text(r),
                              !r.outcome.authenticated &&
                                  r.outcome.reason == "denial-of-authentication" && r.rounds == 4});
    }
  }
  if (both || o.mode == DosOptions::Mode::kCentralized) {
    const auto r = run_mode(sim::Scheme::kProposedCentralized, 2);
    if (o.attackers == 0) {
      rep.findings.push_back({"centralized, no attacker", "authenticated", outcome_text(r),
                              r.outcome.authenticated});
    } else {
      auto excluded = r.excluded;
      auto expected = slots;
      std::sort(excluded.begin(), excluded.end());
      std::sort(expected.begin(), expected.end());
      const bool enough = o.m - o.attackers >= o.t;
      rep.findings.push_back(
          {"centralized",
           enough ? "attackers identified, honest subset authenticates"
                  : "attackers identified, honest subset below threshold",
           outcome_text(r),
           excluded == expected && r.outcome.authenticated == enough});
    }
  }
  return rep;
}

AttackReport node_compromise(const CompromiseOptions& o) {
  AttackReport rep;
  rep.scenario = "node-compromise";
  rep.claim = "a stolen share impersonates its owner until credentials are rotated";
  Rng rng(o.seed);
  auto group = make_group(o, rng);
  const auto s = group_key(group);

  Impersonator adv(o.victim, false);
  adv.credential = share_of(group, o.victim);
  auto sc = base_scenario(o, 1);
  const auto r = sim::run(sc, &adv, group);
  const auto attacker = adv.finish();
  const bool stole_key = attacker && attacker->ok() && attacker->group_key && *attacker->group_key == s;
  rep.findings.push_back(
      {"impersonation", "succeeds: authenticated and the attacker recovers the group key",
       outcome_text(r) + (r.key_agreement.all_recovered ? ", honest members recovered" : "") +
           (stole_key ? ", attacker holds the group key" : ", attacker without key"),
       r.outcome.authenticated && r.key_agreement.all_recovered && stole_key});

  Rng rot_rng(o.seed + 7);
  const std::string excluded[] = {o.victim};
  auto rotated = rotate_credentials(group.config, s, rot_rng, excluded);
  sim::GroupSetup next{rotated.config, rotated.shares};
  Impersonator intruder(o.victim, true);
  intruder.replay = encode_public_share(make_public_share(share_of(group, o.victim), group.config),
                                        group.config);
  auto sc2 = sc;
  sc2.seed = o.seed * 1000 + 2;
  sc2.n = next.config.roster.size();
  sc2.m = std::min(o.m, sc2.n);
  sc2.t = std::min(sc2.t, sc2.m);
  const auto r2 = sim::run(sc2, &intruder, next);
  rep.findings.push_back({"after rotation excluding the victim",
                          "impersonation rejected, honest members authenticate",
                          outcome_text(r2),
                          r2.outcome.authenticated && contains(r2.rejected, o.victim) &&
                              !next.config.has_member(o.victim)});

  // The rotation bundle is keyed by the old group key, which the attacker
  // learned above.
  bool readable = false;
  try {
    const auto& entry = rotated.bundle.front();
    const auto opened = accept_rotation(s, next.config, entry);
    readable = opened == rotated.shares.front();
  } catch (const Error&) {
    readable = false;
  }
  rep.findings.push_back({"rotation bundle against a holder of the old group key",
                          "readable (rotation evicts the identity, not an attacker that kept "
                          "the group key)",
                          readable ? "readable" : "not readable", readable});

  // Without a compromise, t - 1 shares leave every secret and every forged
  // share equally consistent.
  {
    const Prime q(BigInt(257));
    const std::size_t t = 3;
    Rng trng(o.seed + 11);
    const auto poly = sample_polynomial(t, FieldElement(random_below(trng, q.value()), q), trng);
    const auto xs = default_abscissae(t, q);
    const auto shares = issue_shares(poly, xs);
    const std::vector<Share> known(shares.begin(), shares.begin() + (t - 1));
    bool below_rejected = false;
    try {
      (void)reconstruct(known, t);
    } catch (const Error& e) {
      below_rejected = e.kind() == ErrorKind::kBelowThreshold;
    }
    // For each candidate secret, count degree-(t-1) completions through the
    // known shares; for a fresh x, count values some completion produces.
    std::size_t secrets_consistent = 0;
    std::set<BigInt> forged_values;
    const FieldElement x_new(BigInt(t + 1), q);
    for (std::uint64_t cand = 0; cand < 257; ++cand) {
      std::vector<Share> pts = known;
      pts.push_back(Share{FieldElement::zero(q), FieldElement(cand, q), "s"});
      // Lagrange through (0, cand) and the known shares, evaluated at x_new.
      std::vector<FieldElement> px;
      for (const auto& p : pts) px.push_back(p.x);
      FieldElement value = FieldElement::zero(q);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        FieldElement li = FieldElement::one(q);
        for (std::size_t j = 0; j < pts.size(); ++j)
          if (j != i) li *= (x_new - px[j]) * (px[i] - px[j]).inv();
        value += li * pts[i].y;
      }
      ++secrets_consistent;
      forged_values.insert(value.residue());
    }
    rep.findings.push_back({"no compromise, t-1 shares on F_257",
                            "all 257 secrets consistent, forged share uniform, reconstruction "
                            "refused",
                            std::to_string(secrets_consistent) + " secrets consistent, " +
                                std::to_string(forged_values.size()) + " distinct forged values" +
                                (below_rejected ? ", reconstruction refused" : ""),
                            secrets_consistent == 257 && forged_values.size() == 257 && below_rejected});
  }
  return rep;
}

AttackReport eavesdrop_secrecy_check(const EavesdropOptions& o) {
  AttackReport rep;
  rep.scenario = "eavesdrop";
  rep.claim = "the transcript carries no secret in the clear; recovering one takes a "
              "discrete-log search";
  Rng rng(o.seed);
  auto group = make_group(o, rng);
  const auto s = group_key(group);
  auto sc = base_scenario(o, 1);
  const auto r = sim::run(sc, nullptr, group);

  std::vector<std::pair<std::string, Bytes>> secrets;
  auto add_secret = [&](const std::string& label, Bytes b) {
    secrets.emplace_back(label, b);
    std::size_t lead = 0;
    while (lead + 1 < b.size() && b[lead] == 0) ++lead;
    if (lead) secrets.emplace_back(label + " (minimal)", Bytes(b.begin() + lead, b.end()));
  };
  add_secret("s", s.to_bytes());
  std::vector<Share> active(group.shares.begin(), group.shares.begin() + o.m);
  {
    OpCounter scratch;
    CountingScope quiet(scratch);
    for (const auto& sh : active) add_secret("f(" + sh.member_id + ")", sh.y.to_bytes());
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const auto k = derive_pairwise_key(active[i], make_public_share(active[j], group.config),
                                           group.config);
        add_secret("K(" + active[i].member_id + "," + active[j].member_id + ")",
                   Bytes(k.bytes.begin(), k.bytes.end()));
      }
  }
  const auto leaks = scan_transcript(r.transcript, secrets);
  rep.findings.push_back({"honest proposed run", "0 leaks",
                          std::to_string(leaks.size()) + " leaks in " +
                              std::to_string(r.transcript.size()) + " frames, " +
                              (r.key_agreement.all_recovered ? "keys agreed" : "keys not agreed"),
                          leaks.empty() && r.key_agreement.all_recovered});

  {
    LeakyMember adv(active.front());
    auto sc2 = sc;
    sc2.key_agreement = false;
    const auto r2 = sim::run(sc2, &adv, group);
    const auto found = scan_transcript(r2.transcript, secrets);
    const bool flagged = std::any_of(found.begin(), found.end(), [&](const Leak& l) {
      return l.secret.rfind("f(" + active.front().member_id + ")", 0) == 0;
    });
    rep.findings.push_back({"negative control: raw share broadcast", "leak flagged",
                            std::to_string(found.size()) + " leaks", flagged});
  }

  {
    Rng hrng(o.seed + 5);
    const auto setup = harn::harn_init(o.t, o.n, harn::fixture_group(), hrng);
    sim::Scenario hs;
    hs.scheme = sim::Scheme::kHarn;
    hs.m = o.m;
    hs.t = o.t;
    hs.n = o.n;
    hs.seed = o.seed * 1000 + 3;
    hs.record_transcript = true;
    const auto hr = sim::run(hs, nullptr, std::nullopt, &setup);
    std::vector<FieldElement> xs;
    for (std::size_t i = 0; i < o.m; ++i) xs.push_back(setup.tokens[i].x);
    std::vector<std::pair<std::string, Bytes>> cs, es;
    {
      OpCounter scratch;
      CountingScope quiet(scratch);
      for (std::size_t i = 0; i < o.m; ++i) {
        const auto& tok = setup.tokens[i];
        cs.emplace_back("c(" + tok.member_id + ")",
                        harn::harn_contribution(tok, xs, setup.params).to_bytes());
        es.emplace_back("e(" + tok.member_id + ")",
                        harn::harn_release(tok, xs, setup.params).e.to_bytes());
      }
    }
    const auto c_hits = scan_transcript(hr.transcript, cs);
    std::set<std::string> e_found;
    for (const auto& l : scan_transcript(hr.transcript, es)) e_found.insert(l.secret);
    rep.findings.push_back({"harn transcript", "every e_i present, no c_i",
                            std::to_string(e_found.size()) + "/" + std::to_string(o.m) +
                                " e_i present, " + std::to_string(c_hits.size()) + " c_i hits",
                            hr.outcome.authenticated && e_found.size() == o.m && c_hits.empty()});
  }

  {
    const auto tiny = builtin_curve("test2017");
    std::string observed;
    bool increasing = true;
    double previous = 0;
    for (const int order : {5, 11, 37, 55, 185, 407, 2035}) {
      const double steps = mean_dlog_steps(tiny, BigInt(order));
      observed += (observed.empty() ? "" : ", ") + std::to_string(order) + ":" +
                  std::to_string(static_cast<long>(steps + 0.5));
      if (steps <= previous) increasing = false;
      previous = steps;
    }
    rep.findings.push_back({"discrete-log search on the test curve",
                            "mean search steps grow with subgroup order", observed, increasing});
  }
  return rep;
}

AttackReport verifier_flooding(const FloodingOptions& o) {
  AttackReport rep;
  rep.scenario = "verifier-flooding";
  rep.claim = "members sending at once pile up at the confirmation point and can lock it";
  auto run_with = [&](sim::SendSchedule schedule, std::size_t buffer) {
    sim::Scenario sc;
    sc.scheme = sim::Scheme::kProposedCentralized;
    sc.m = o.m;
    sc.seed = o.seed;
    sc.schedule = schedule;
    sc.verifier_queue_capacity = buffer;
    return sim::run(sc);
  };
  const auto burst = run_with(sim::SendSchedule::kSimultaneous, 0);
  const auto paced = run_with(sim::SendSchedule::kStaggered, 0);
  auto metrics = [](const sim::SimReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "queue %zu, share latency %.3f s, auth %.3f s",
                  r.max_verifier_queue, r.mean_share_latency, r.auth_time);
    return std::string(buf);
  };
  rep.findings.push_back({"unbounded buffer",
                          "simultaneous sends queue up and wait longer than staggered ones",
                          "simultaneous: " + metrics(burst) + "; staggered: " + metrics(paced),
                          burst.max_verifier_queue > paced.max_verifier_queue &&
                              burst.mean_share_latency > paced.mean_share_latency});
  if (o.buffer > 0 && o.buffer < o.m) {
    const auto locked = run_with(sim::SendSchedule::kSimultaneous, o.buffer);
    const auto ok = run_with(sim::SendSchedule::kStaggered, o.buffer);
    rep.findings.push_back(
        {"buffer of " + std::to_string(o.buffer),
         "simultaneous sends overflow and deny authentication; staggered sends authenticate",
         "simultaneous: " + outcome_text(locked) + ", dropped " +
             std::to_string(locked.dropped_at_verifier) + "; staggered: " + outcome_text(ok),
         !locked.outcome.authenticated && locked.dropped_at_verifier > 0 && ok.outcome.authenticated});
  }
  return rep;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"replay", "dos-invalid-share", "node-compromise",
                                              "eavesdrop", "verifier-flooding"};
  return names;
}

AttackReport run_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "replay") {
    ReplayOptions o;
    o.seed = seed;
    return replay_attack(o);
  }
  if (name == "dos-invalid-share") {
    DosOptions o;
    o.seed = seed;
    return dos_invalid_share(o);
  }
  if (name == "node-compromise") {
    CompromiseOptions o;
    o.seed = seed;
    return node_compromise(o);
  }
  if (name == "eavesdrop") {
    EavesdropOptions o;
    o.seed = seed;
    return eavesdrop_secrecy_check(o);
  }
  if (name == "verifier-flooding") {
    FloodingOptions o;
    o.seed = seed;
    return verifier_flooding(o);
  }
  std::string valid;
  for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::kInvalidArgument, "unknown attack '" + name + "' (valid: " + valid + ")");
}

}  // namespace lwgas::attacks
