#include "lwgas/sim.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <set>
#include <thread>

#include <json.hpp>


namespace lwgas::sim {

using nlohmann::json;

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kHarn: return "harn";
    case Scheme::kProposedCentralized: return "proposed-centralized";
    case Scheme::kProposedDecentralized: return "proposed-decentralized";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "harn") return Scheme::kHarn;
  if (name == "proposed-centralized" || name == "centralized") return Scheme::kProposedCentralized;
  if (name == "proposed-decentralized" || name == "decentralized")
    return Scheme::kProposedDecentralized;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown scheme '" + std::string(name) +
                  "' (expected harn, proposed-centralized, proposed-decentralized)");
}

std::string_view to_string(VerifierPolicy policy) {
  switch (policy) {
    case VerifierPolicy::kGm: return "gm";
    case VerifierPolicy::kFixed: return "fixed";
    case VerifierPolicy::kMaxBattery: return "max-battery";
  }
  return "?";
}

VerifierPolicy parse_verifier_policy(std::string_view name) {
  if (name == "gm") return VerifierPolicy::kGm;
  if (name == "fixed") return VerifierPolicy::kFixed;
  if (name == "max-battery") return VerifierPolicy::kMaxBattery;
  throw Error(ErrorKind::kInvalidArgument, "unknown verifier policy '" + std::string(name) +
                                               "' (expected gm, fixed, max-battery)");
}

namespace {

std::string_view to_string(SendSchedule s) {
  return s == SendSchedule::kSimultaneous ? "simultaneous" : "staggered";
}

SendSchedule parse_schedule(std::string_view name) {
  if (name == "simultaneous") return SendSchedule::kSimultaneous;
  if (name == "staggered") return SendSchedule::kStaggered;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown schedule '" + std::string(name) + "' (expected simultaneous, staggered)");
}

}  // namespace

std::uint64_t tmulq_charge(const OpCounter& ops) {
  return ops.weighted_mul + cost::kTemInTmulq * ops.scalar_mul;
}

VerifierPolicy Scenario::policy() const {
  if (verifier_policy) return *verifier_policy;
  return scheme == Scheme::kProposedDecentralized ? VerifierPolicy::kMaxBattery
                                                  : VerifierPolicy::kGm;
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> problems;
  if (m == 0) problems.push_back("m must be at least 1");
  if (t > m) problems.push_back("t must not exceed m");
  if (n != 0 && n < m) problems.push_back("n must be at least m");
  if (!(bitrate_bps > 0)) problems.push_back("bitrate_bps must be positive");
  if (!(compute_rate > 0)) problems.push_back("compute_rate must be positive");
  if (gm_compute_rate < 0) problems.push_back("gm_compute_rate must not be negative");
  if (!(joules_per_tmulq > 0)) problems.push_back("joules_per_tmulq must be positive");
  if (radio.tx_joules_per_byte < 0 || radio.rx_joules_per_byte < 0)
    problems.push_back("radio costs must not be negative");
  if (!(loss_probability >= 0 && loss_probability <= 1))
    problems.push_back("loss_probability must lie in [0, 1]");
  if (harn_group != "fixture" && harn_group != "tiny")
    problems.push_back("harn_group must be fixture or tiny");
  if (!battery.empty() && battery.size() != m)
    problems.push_back("battery must list one level per member");
  if (stagger_gap_s < 0) problems.push_back("stagger_gap_s must not be negative");
  if (!(round_timeout_s > 0)) problems.push_back("round_timeout_s must be positive");
  const auto pol = policy();
  if (scheme == Scheme::kProposedDecentralized && pol == VerifierPolicy::kGm)
    problems.push_back("decentralized runs have no group manager to verify");
  if (scheme != Scheme::kProposedDecentralized && pol != VerifierPolicy::kGm)
    problems.push_back("only decentralized runs pick a member as verifier");
  if (pol == VerifierPolicy::kFixed && fixed_verifier.empty())
    problems.push_back("fixed verifier policy needs fixed_verifier");
  if (scheme == Scheme::kHarn && key_agreement)
    problems.push_back("key agreement is only simulated for the proposed scheme");
  return problems;
}

std::string Scenario::to_json() const {
  json j;
  j["scheme"] = std::string(sim::to_string(scheme));
  j["m"] = m;
  j["t"] = t;
  j["n"] = n;
  j["bitrate_bps"] = bitrate_bps;
  j["compute_rate"] = compute_rate;
  j["gm_compute_rate"] = gm_compute_rate;
  j["joules_per_tmulq"] = joules_per_tmulq;
  j["radio_tx_j_per_byte"] = radio.tx_joules_per_byte;
  j["radio_rx_j_per_byte"] = radio.rx_joules_per_byte;
  j["loss_probability"] = loss_probability;
  j["seed"] = seed;
  j["curve"] = curve_ref;
  j["harn_group"] = harn_group;
  j["verifier_policy"] = std::string(sim::to_string(policy()));
  j["fixed_verifier"] = fixed_verifier;
  j["battery"] = battery;
  j["schedule"] = std::string(to_string(schedule));
  j["stagger_gap_s"] = stagger_gap_s;
  j["verifier_queue_capacity"] = verifier_queue_capacity;
  j["exclude_culprits"] = exclude_culprits;
  j["key_agreement"] = key_agreement;
  j["max_restarts"] = max_restarts;
  j["round_timeout_s"] = round_timeout_s;
  return j.dump(2);
}

Scenario Scenario::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kDecode, std::string("scenario: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kDecode, "scenario: expected a JSON object");
  Scenario s;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "scheme") s.scheme = parse_scheme(v.get<std::string>());
      else if (key == "m") s.m = v.get<std::size_t>();
      else if (key == "t") s.t = v.get<std::size_t>();
      else if (key == "n") s.n = v.get<std::size_t>();
      else if (key == "bitrate_bps") s.bitrate_bps = v.get<double>();
      else if (key == "compute_rate") s.compute_rate = v.get<double>();
      else if (key == "gm_compute_rate") s.gm_compute_rate = v.get<double>();
      else if (key == "joules_per_tmulq") s.joules_per_tmulq = v.get<double>();
      else if (key == "radio_tx_j_per_byte") s.radio.tx_joules_per_byte = v.get<double>();
      else if (key == "radio_rx_j_per_byte") s.radio.rx_joules_per_byte = v.get<double>();
      else if (key == "loss_probability") s.loss_probability = v.get<double>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "curve") s.curve_ref = v.get<std::string>();
      else if (key == "harn_group") s.harn_group = v.get<std::string>();
      else if (key == "verifier_policy") s.verifier_policy = parse_verifier_policy(v.get<std::string>());
      else if (key == "fixed_verifier") s.fixed_verifier = v.get<std::string>();
      else if (key == "battery") s.battery = v.get<std::vector<double>>();
      else if (key == "schedule") s.schedule = parse_schedule(v.get<std::string>());
      else if (key == "stagger_gap_s") s.stagger_gap_s = v.get<double>();
      else if (key == "verifier_queue_capacity") s.verifier_queue_capacity = v.get<std::size_t>();
      else if (key == "exclude_culprits") s.exclude_culprits = v.get<bool>();
      else if (key == "key_agreement") s.key_agreement = v.get<bool>();
      else if (key == "max_restarts") s.max_restarts = v.get<std::size_t>();
      else if (key == "round_timeout_s") s.round_timeout_s = v.get<double>();
      else throw Error(ErrorKind::kDecode, "scenario: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kDecode, std::string("scenario: ") + e.what());
  }
  return s;
}

bool member_id_less(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && s[i - 1] >= '0' && s[i - 1] <= '9') --i;
    return std::pair{s.substr(0, i), s.substr(i)};
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  auto strip = [](std::string_view d) {
    while (d.size() > 1 && d.front() == '0') d.remove_prefix(1);
    return d;
  };
  na = strip(na);
  nb = strip(nb);
  if (na.size() != nb.size()) return na.size() < nb.size();
  if (na != nb) return na < nb;
  return a < b;
}

std::string select_verifier(VerifierPolicy policy, std::span<const NodeState> nodes,
                            std::string_view fixed_id) {
  switch (policy) {
    case VerifierPolicy::kGm:
      return "GM";
    case VerifierPolicy::kFixed: {
      for (const auto& node : nodes)
        if (node.member_id == fixed_id) return node.member_id;
      throw Error(ErrorKind::kUnknownMember,
                  "fixed verifier '" + std::string(fixed_id) + "' is not participating");
    }
    case VerifierPolicy::kMaxBattery: {
      if (nodes.empty()) throw Error(ErrorKind::kInvalidArgument, "no members to pick a verifier from");
      const NodeState* best = &nodes.front();
      for (const auto& node : nodes.subspan(1)) {
        if (node.battery > best->battery ||
            (node.battery == best->battery && member_id_less(node.member_id, best->member_id)))
          best = &node;
      }
      return best->member_id;
    }
  }
  return {};
}

namespace {

struct Node {
  std::string id;
  bool is_gm = false;
  bool adversarial = false;
  double rate = 1.0;
  double cpu_free_at = 0.0;
  OpCounter ops;
  std::uint64_t tmulq = 0;
  std::uint64_t bytes_tx = 0;
  std::uint64_t bytes_rx = 0;
  std::uint64_t messages = 0;
  double battery = 0.0;

  std::optional<MemberState> state;
  std::optional<harn::Token> token;
  // per round
  std::vector<harn::Release> releases;
  std::vector<EncryptedShare> incoming;
  bool ka_started = false;
  bool ka_finished = false;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::uint64_t out = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

class Engine {
 public:
  Engine(const Scenario& sc, Adversary* adversary, const std::optional<GroupSetup>& group,
         const harn::Setup* harn_setup)
      : sc_(sc),
        adv_(adversary),
        rng_(mix(sc.seed, 1)),
        loss_rng_(mix(sc.seed, 2)),
        adv_rng_(mix(sc.seed, 3)) {
    report_.scheme = sc.scheme;
    report_.m = sc.m;
    report_.t = sc.threshold();
    setup(group, harn_setup);
  }

  SimReport run() {
    start_round();
    while (!queue_.empty()) {
      auto item = queue_.top();
      queue_.pop();
      now_ = item.time;
      item.action();
    }
    finish_report();
    return std::move(report_);
  }

 private:
  enum class Stage { kConfirm, kKeyAgreement, kDone };

  struct Item {
    double time;
    std::uint64_t seq;
    std::function<void()> action;
    bool operator>(const Item& o) const {
      return time != o.time ? time > o.time : seq > o.seq;
    }
  };

  // ----- setup ------------------------------------------------------------

  void setup(const std::optional<GroupSetup>& group, const harn::Setup* harn_setup) {
    const std::size_t n = sc_.roster_size();
    const std::size_t t = sc_.threshold();
    std::vector<std::string> ids;
    if (sc_.scheme == Scheme::kHarn && harn_setup) {
      harn_ = *harn_setup;
      if (harn_->tokens.size() < sc_.m)
        throw Error(ErrorKind::kInvalidArgument, "harn setup has fewer tokens than m");
      for (const auto& tok : harn_->tokens) ids.push_back(tok.member_id);
    } else if (sc_.scheme == Scheme::kHarn) {
      auto g = sc_.harn_group == "tiny" ? harn::tiny_group() : harn::fixture_group();
      OpCounter scratch;
      CountingScope quiet(scratch);
      harn_ = harn::harn_init(t, n, g, rng_);
      for (const auto& tok : harn_->tokens) ids.push_back(tok.member_id);
    } else {
      if (group) {
        config_ = group->config;
        gm_shares_ = group->shares;
      } else {
        auto curve = load_curve(sc_.curve_ref);
        if (BigInt(n) >= curve.scalar_order())
          throw Error(ErrorKind::kInvalidArgument,
                      "roster of " + std::to_string(n) + " does not fit the share field of " +
                          curve.name());
        OpCounter scratch;
        CountingScope quiet(scratch);
        InitOptions opts;
        opts.curve_ref = sc_.curve_ref;
        auto init = gm_init(t, n, curve, rng_, opts);
        config_ = std::move(init.config);
        gm_shares_ = std::move(init.shares);
      }
      if (config_->roster.size() < sc_.m)
        throw Error(ErrorKind::kInvalidArgument, "roster is smaller than m");
      for (const auto& e : config_->roster) ids.push_back(e.member_id);
    }
    ids.resize(sc_.m);

    std::vector<double> battery = sc_.battery;
    if (battery.empty()) {
      Rng brng(mix(sc_.seed, 4));
      std::uniform_real_distribution<double> dist(0.2, 1.0);
      for (std::size_t i = 0; i < sc_.m; ++i) battery.push_back(std::round(dist(brng) * 1000) / 1000);
    }

    const bool with_gm = sc_.scheme != Scheme::kProposedDecentralized;
    if (with_gm) {
      Node gm;
      gm.id = "GM";
      gm.is_gm = true;
      gm.rate = sc_.gm_compute_rate > 0 ? sc_.gm_compute_rate : sc_.compute_rate;
      gm.battery = 1.0;
      add_node(std::move(gm));
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Node node;
      node.id = ids[i];
      node.rate = sc_.compute_rate;
      node.battery = battery[i];
      node.adversarial = adv_ && adv_->controls(node.id);
      if (!node.adversarial) {
        if (harn_) {
          node.token = harn_->tokens[i];
        } else {
          const auto it = std::find_if(gm_shares_.begin(), gm_shares_.end(),
                                       [&](const Share& s) { return s.member_id == ids[i]; });
          node.state = make_member_state(*it, *config_);
        }
      }
      participants_.push_back(node.id);
      add_node(std::move(node));
    }
    if (adv_) {
      for (const auto& id : adv_->intruders()) {
        if (index_.count(id)) continue;
        Node node;
        node.id = id;
        node.rate = sc_.compute_rate;
        node.adversarial = true;
        intruders_.push_back(id);
        add_node(std::move(node));
      }
    }

    if (sc_.scheme == Scheme::kProposedDecentralized) {
      std::vector<NodeState> states;
      for (const auto& id : participants_) {
        const auto& node = nodes_[index_.at(id)];
        if (!node.adversarial) states.push_back({node.id, node.battery});
      }
      verifier_ = select_verifier(sc_.policy(), states, sc_.fixed_verifier);
    } else {
      verifier_ = "GM";
    }
    report_.verifier_id = verifier_;
  }

  void add_node(Node node) {
    index_[node.id] = nodes_.size();
    nodes_.push_back(std::move(node));
  }

  Node& node(const std::string& id) { return nodes_[index_.at(id)]; }

  // ----- plumbing ---------------------------------------------------------

  void at(double time, std::function<void()> action) {
    queue_.push(Item{time, seq_++, std::move(action)});
  }

  void log(const std::string& who, std::string what) {
    if (sc_.record_events) report_.events.push_back({now_, who, std::move(what)});
  }

  /// Runs `work` now (measuring it) and fires `done` when the node's CPU
  /// would have finished it.
  void compute(Node& n, const std::function<void()>& work, std::function<void()> done) {
    OpCounter local;
    {
      CountingScope scope(local);
      work();
    }
    const auto charge = tmulq_charge(local);
    n.ops += local;
    n.tmulq += charge;
    const double start = std::max(now_, n.cpu_free_at);
    const double end = start + static_cast<double>(charge) / n.rate;
    n.cpu_free_at = end;
    at(end, std::move(done));
  }

  void send(Node& from, const wire::Message& msg, const std::string& to = {}) {
    Bytes bytes = wire::encode(msg);
    Frame frame{now_, from.id, to, bytes};
    if (adv_) adv_->observe(frame);
    if (sc_.record_transcript) report_.transcript.push_back(frame);
    const double airtime = static_cast<double>(bytes.size()) * 8.0 / sc_.bitrate_bps;
    const double start = std::max(now_, channel_free_at_);
    const double end = start + airtime;
    channel_free_at_ = end;
    from.bytes_tx += bytes.size();
    from.messages += 1;
    const std::size_t round = round_;
    auto frame_ptr = std::make_shared<const Frame>(std::move(frame));
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      Node& rx = nodes_[i];
      if (rx.id == from.id) continue;
      if (!to.empty() && rx.id != to) continue;
      report_.channel_bytes_offered += bytes.size();
      if (sc_.loss_probability > 0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(loss_rng_) < sc_.loss_probability) continue;
      }
      at(end, [this, i, frame_ptr, round] { receive(nodes_[i], *frame_ptr, round); });
    }
  }

  RunView view() const {
    RunView v;
    v.config = config_ ? &*config_ : nullptr;
    v.round = round_;
    v.public_shares_seen = &seen_public_;
    return v;
  }

  // ----- rounds -----------------------------------------------------------

  std::vector<std::string> active_participants() const {
    std::vector<std::string> out;
    for (const auto& id : participants_)
      if (std::find(report_.excluded.begin(), report_.excluded.end(), id) == report_.excluded.end())
        out.push_back(id);
    return out;
  }

  void start_round() {
    if (round_ >= sc_.max_restarts + 1) {
      ++round_;  // invalidates events still queued for the last round
      conclude(false, last_failure_ == "no-progress" ? "no-progress" : "denial-of-authentication");
      return;
    }
    ++round_;
    report_.rounds = round_;
    active_ = active_participants();
    if (active_.size() < sc_.threshold()) {
      conclude(false, "below-threshold");
      return;
    }
    stage_ = Stage::kConfirm;
    round_start_ = now_;
    verdicts_.clear();
    collected_.clear();
    collected_invalid_ = false;
    seen_public_.clear();
    arrivals_.clear();
    pending_ = 0;
    member_checks_done_ = 0;
    gm_checks_done_ = false;
    harn_received_.clear();
    for (auto& n : nodes_) {
      n.releases.clear();
      n.incoming.clear();
      n.ka_started = n.ka_finished = false;
      if (n.state) {
        n.state->received_public_shares.clear();
        n.state->pairwise_keys.clear();
        n.state->group_key.reset();
      }
    }
    log("GM", "round " + std::to_string(round_) + " start with " + std::to_string(active_.size()) +
                  " members");

    if (harn_) {
      xs_.clear();
      for (const auto& id : active_) xs_.push_back(node(id).token ? node(id).token->x : harn_x(id));
    }

    const double gap = stagger_gap();
    for (std::size_t k = 0; k < active_.size(); ++k) {
      Node& n = node(active_[k]);
      const double slot = sc_.schedule == SendSchedule::kStaggered
                              ? round_start_ + static_cast<double>(k) * gap
                              : round_start_;
      if (n.adversarial) {
        adversary_confirmation(n, slot);
        continue;
      }
      if (harn_) {
        auto rel = std::make_shared<std::optional<harn::Release>>();
        compute(n, [&] { *rel = harn::harn_release(*n.token, xs_, harn_->params); },
                [this, id = n.id, rel, slot, r = round_] {
                  if (r != round_) return;
                  Node& me = node(id);
                  me.releases.push_back(**rel);
                  send_at(id, slot, harn::encode_release(**rel, 0, harn_->params), r);
                  if (me.releases.size() == active_.size()) harn_member_check(id);
                });
      } else {
        auto ps = std::make_shared<std::optional<PublicShare>>();
        compute(n, [&] { *ps = make_public_share(*n.state); },
                [this, id = n.id, ps, slot, r = round_] {
                  if (r != round_) return;
                  log(id, "public share ready");
                  send_at(id, slot, encode_public_share(**ps, *config_), r);
                  if (id == verifier_) accept_share(id, **ps, now_);
                });
      }
    }
    for (const auto& id : intruders_) adversary_confirmation(node(id), round_start_);

    at(now_ + sc_.round_timeout_s, [this, r = round_] {
      if (r != round_ || stage_ != Stage::kConfirm) return;
      log(verifier_, "round timed out");
      fail_round("no-progress", {});
    });
  }

  FieldElement harn_x(const std::string& id) const {
    for (const auto& tok : harn_->tokens)
      if (tok.member_id == id) return tok.x;
    throw Error(ErrorKind::kUnknownMember, id);
  }

  double stagger_gap() const {
    if (sc_.stagger_gap_s > 0) return sc_.stagger_gap_s;
    const auto& v = nodes_[index_.at(verifier_)];
    return static_cast<double>(cost::kTemInTmulq) / v.rate;
  }

  void send_at(const std::string& id, double when, wire::Message msg, std::size_t r) {
    if (when <= now_) {
      send(node(id), msg);
      return;
    }
    at(when, [this, id, msg = std::move(msg), r] {
      if (r == round_) send(node(id), msg);
    });
  }

  void adversary_confirmation(Node& n, double slot) {
    auto msg = adv_->confirmation(n.id, view(), adv_rng_);
    if (!msg) return;
    log(n.id, "adversary transmits");
    send_at(n.id, slot, *msg, round_);
  }

  // ----- reception --------------------------------------------------------

  void receive(Node& rx, const Frame& frame, std::size_t round) {
    rx.bytes_rx += frame.bytes.size();
    rx.messages += 1;
    report_.channel_bytes_delivered += frame.bytes.size();
    if (round != round_ || stage_ == Stage::kDone) return;
    wire::Message msg;
    try {
      msg = wire::decode(frame.bytes);
    } catch (const Error&) {
      log(rx.id, "undecodable frame from " + frame.sender);
      return;
    }
    if (rx.adversarial) {
      if (msg.type == wire::MessageType::kEncryptedShare && adv_)
        adv_->deliver(EncryptedShare::from_message(msg, rx.id));
      if (msg.type == wire::MessageType::kVerdict && adv_ && stage_ == Stage::kKeyAgreement &&
          std::find(active_.begin(), active_.end(), rx.id) != active_.end())
        adversary_key_agreement(rx);
      if (msg.type == wire::MessageType::kPublicShare) observe_public(msg);
      return;
    }
    switch (msg.type) {
      case wire::MessageType::kPublicShare: on_public_share(rx, msg); break;
      case wire::MessageType::kHarnRelease: on_release(rx, msg); break;
      case wire::MessageType::kVerdict:
        if (stage_ == Stage::kKeyAgreement) start_key_agreement(rx);
        break;
      case wire::MessageType::kEncryptedShare: on_encrypted(rx, msg); break;
      default: break;
    }
  }

  void observe_public(const wire::Message& msg) {
    try {
      seen_public_.insert_or_assign(msg.member_id, decode_public_share(msg, config_->curve));
    } catch (const Error&) {
    }
  }

  bool is_active(const std::string& id) const {
    return std::find(active_.begin(), active_.end(), id) != active_.end();
  }

  void reject(const std::string& rx, const std::string& id) {
    log(rx, "rejected frame claiming " + id);
    if (std::find(report_.rejected.begin(), report_.rejected.end(), id) == report_.rejected.end())
      report_.rejected.push_back(id);
  }

  void on_public_share(Node& rx, const wire::Message& msg) {
    if (stage_ != Stage::kConfirm) return;
    observe_public(msg);
    const bool known = config_->has_member(msg.member_id) && is_active(msg.member_id);
    std::optional<PublicShare> ps;
    try {
      ps = decode_public_share(msg, config_->curve);
    } catch (const Error&) {
    }
    if (rx.id != verifier_) {
      if (known && ps && rx.state && msg.member_id != rx.id)
        rx.state->received_public_shares.insert_or_assign(msg.member_id, *ps);
      return;
    }
    if (!known) {
      reject(rx.id, msg.member_id);
      return;
    }
    if (!ps) {
      log(rx.id, "malformed share from " + msg.member_id);
      if (sc_.scheme == Scheme::kProposedCentralized) {
        record_verdict(msg.member_id, false);
      } else if (!collected_.count(msg.member_id)) {
        collected_invalid_ = true;
        collected_.emplace(msg.member_id, std::nullopt);
        maybe_decentralized_verify();
      }
      return;
    }
    if (rx.state && msg.member_id != rx.id)
      rx.state->received_public_shares.insert_or_assign(msg.member_id, *ps);
    accept_share(rx.id, *ps, now_);
  }

  bool admit(const std::string& id) {
    if (sc_.verifier_queue_capacity > 0 && pending_ >= sc_.verifier_queue_capacity) {
      ++report_.dropped_at_verifier;
      log(verifier_, "buffer full, dropped share from " + id);
      return false;
    }
    ++pending_;
    report_.max_verifier_queue = std::max(report_.max_verifier_queue, pending_);
    arrivals_[id] = now_;
    return true;
  }

  void note_latency(const std::string& id) {
    latency_sum_ += now_ - arrivals_[id];
    ++latency_count_;
  }

  void accept_share(const std::string& verifier, const PublicShare& ps, double) {
    if (sc_.scheme == Scheme::kProposedCentralized) {
      if (verdicts_.count(ps.member_id) || arrivals_.count(ps.member_id)) return;
      if (!admit(ps.member_id)) return;
      auto verdict = std::make_shared<bool>(false);
      compute(node(verifier),
              [&] {
                const PublicShare one[] = {ps};
                *verdict = gm_verify(*config_, gm_shares_, one).all_valid();
              },
              [this, id = ps.member_id, verdict, r = round_] {
                if (r != round_) return;
                --pending_;
                note_latency(id);
                record_verdict(id, *verdict);
              });
      return;
    }
    // decentralized: buffer until every participant is in
    if (collected_.count(ps.member_id)) return;
    if (ps.member_id != verifier_ && !admit(ps.member_id)) return;
    if (ps.member_id == verifier_) arrivals_[ps.member_id] = now_;
    collected_.emplace(ps.member_id, ps);
    maybe_decentralized_verify();
  }

  void maybe_decentralized_verify() {
    if (collected_.size() != active_.size()) return;
    if (collected_invalid_) {
      log(verifier_, "malformed share, confirmation fails");
      fail_round("denial-of-authentication", {});
      return;
    }
    std::vector<PublicShare> shares;
    for (const auto& id : active_) shares.push_back(*collected_.at(id));
    auto ok = std::make_shared<bool>(false);
    compute(node(verifier_),
            [&] { *ok = decentralized_verify(*config_, shares, shares.size()); },
            [this, ok, r = round_] {
              if (r != round_) return;
              for (const auto& [id, t] : arrivals_) {
                if (id == verifier_) continue;
                latency_sum_ += now_ - t;
                ++latency_count_;
              }
              pending_ = 0;
              log(verifier_, *ok ? "sum matches Q" : "sum does not match Q");
              if (*ok) confirmation_success();
              else fail_round("denial-of-authentication", {});
            });
  }

  void record_verdict(const std::string& id, bool valid) {
    if (verdicts_.count(id)) return;
    verdicts_[id] = valid;
    log(verifier_, id + (valid ? " valid" : " invalid"));
    if (verdicts_.size() < active_.size()) return;
    if (harn_) {
      harn_gm_final();
      return;
    }
    std::vector<std::string> culprits;
    for (const auto& id2 : active_)
      if (!verdicts_.at(id2)) culprits.push_back(id2);
    if (culprits.empty()) confirmation_success();
    else fail_round("denial-of-authentication", culprits);
  }

  // ----- harn -------------------------------------------------------------

  void on_release(Node& rx, const wire::Message& msg) {
    if (stage_ != Stage::kConfirm) return;
    std::optional<harn::Release> rel;
    try {
      rel = harn::decode_release(msg, harn_->params);
    } catch (const Error&) {
    }
    const bool known = std::any_of(harn_->tokens.begin(), harn_->tokens.end(),
                                   [&](const harn::Token& t) { return t.member_id == msg.member_id; }) &&
                       is_active(msg.member_id);
    if (!known) {
      if (rx.is_gm) reject(rx.id, msg.member_id);
      return;
    }
    if (!rel) {
      if (rx.is_gm) record_verdict(msg.member_id, false);
      return;
    }
    if (!rx.is_gm) {
      const bool dup = std::any_of(rx.releases.begin(), rx.releases.end(),
                                   [&](const harn::Release& r) { return r.member_id == rel->member_id; });
      if (dup) return;
      rx.releases.push_back(*rel);
      if (rx.releases.size() == active_.size()) harn_member_check(rx.id);
      return;
    }
    if (verdicts_.count(rel->member_id) || arrivals_.count(rel->member_id)) return;
    if (!admit(rel->member_id)) return;
    harn_received_.push_back(*rel);
    const auto& token = *std::find_if(harn_->tokens.begin(), harn_->tokens.end(),
                                      [&](const harn::Token& t) { return t.member_id == rel->member_id; });
    auto valid = std::make_shared<bool>(false);
    compute(rx, [&] { *valid = harn::harn_release(token, xs_, harn_->params).e == rel->e; },
            [this, id = rel->member_id, valid, r = round_] {
              if (r != round_) return;
              --pending_;
              note_latency(id);
              record_verdict(id, *valid);
            });
  }

  void harn_member_check(const std::string& id) {
    Node& n = node(id);
    auto ok = std::make_shared<bool>(false);
    auto releases = n.releases;
    compute(n, [&] { *ok = harn::harn_verify(releases, harn_->params); },
            [this, id, ok, r = round_] {
              if (r != round_) return;
              log(id, *ok ? "product matches" : "product mismatch");
              if (!*ok) member_product_failed_ = true;
              ++member_checks_done_;
              harn_maybe_done();
            });
  }

  void harn_gm_final() {
    std::vector<std::string> culprits;
    for (const auto& id : active_)
      if (!verdicts_.at(id)) culprits.push_back(id);
    if (!culprits.empty()) {
      fail_round("denial-of-authentication", culprits);
      return;
    }
    auto ok = std::make_shared<bool>(false);
    auto rels = harn_received_;
    compute(node("GM"), [&] { *ok = harn::harn_verify(rels, harn_->params); },
            [this, ok, r = round_] {
              if (r != round_) return;
              gm_checks_done_ = true;
              gm_product_ok_ = *ok;
              harn_maybe_done();
            });
  }

  std::size_t honest_active() const {
    std::size_t c = 0;
    for (const auto& id : active_)
      if (!nodes_[index_.at(id)].adversarial) ++c;
    return c;
  }

  void harn_maybe_done() {
    if (!gm_checks_done_ || member_checks_done_ < honest_active()) return;
    if (gm_product_ok_ && !member_product_failed_) confirmation_success();
    else fail_round("denial-of-authentication", {});
  }

  // ----- outcomes ---------------------------------------------------------

  void fail_round(const std::string& reason, const std::vector<std::string>& culprits) {
    last_failure_ = reason;
    stage_ = Stage::kDone;
    if (!culprits.empty() && sc_.exclude_culprits) {
      for (const auto& c : culprits) report_.excluded.push_back(c);
    }
    log(verifier_, "round " + std::to_string(round_) + " failed: " + reason);
    Node& v = node(verifier_);
    wire::Writer w;
    w.u8(0);
    w.u8(static_cast<std::uint8_t>(std::min<std::size_t>(culprits.size(), 255)));
    for (std::size_t i = 0; i < culprits.size() && i < 255; ++i) {
      const auto& c = culprits[i];
      w.u8(static_cast<std::uint8_t>(c.size()));
      w.raw(std::span(reinterpret_cast<const std::uint8_t*>(c.data()), c.size()));
    }
    send(v, wire::Message{wire::MessageType::kVerdict, epoch(), v.id, w.take()});
    const std::size_t r = round_;
    at(std::max(now_, channel_free_at_), [this, r] {
      if (r == round_) start_round();
    });
  }

  std::uint32_t epoch() const { return config_ ? config_->epoch : 0; }

  void confirmation_success() {
    report_.auth_time = now_;
    report_.outcome = {true, {}};
    log(verifier_, "authentication complete");
    Node& v = node(verifier_);
    wire::Writer w;
    w.u8(1);
    w.u8(0);
    if (sc_.key_agreement) {
      stage_ = Stage::kKeyAgreement;
      ka_start_ = now_;
      report_.key_agreement.attempted = true;
      send(v, wire::Message{wire::MessageType::kVerdict, epoch(), v.id, w.take()});
      if (!v.is_gm) start_key_agreement(v);
      at(now_ + sc_.round_timeout_s, [this, r = round_] {
        if (r != round_ || stage_ != Stage::kKeyAgreement) return;
        log("GM", "key agreement timed out");
        finish_key_agreement();
      });
    } else {
      send(v, wire::Message{wire::MessageType::kVerdict, epoch(), v.id, w.take()});
      stage_ = Stage::kDone;
    }
  }

  void conclude(bool ok, const std::string& reason) {
    stage_ = Stage::kDone;
    report_.outcome = {ok, reason};
    log("GM", "run " + (ok ? std::string("authenticated") : "failed: " + reason));
  }

  // ----- key agreement ----------------------------------------------------

  void start_key_agreement(Node& n) {
    if (n.ka_started || !n.state || !is_active(n.id)) return;
    n.ka_started = true;
    auto sealed = std::make_shared<std::vector<EncryptedShare>>();
    compute(n,
            [&] {
              derive_pairwise_keys(*n.state);
              *sealed = seal_share_for_peers(*n.state, rng_);
            },
            [this, id = n.id, sealed, r = round_] {
              if (r != round_ || stage_ != Stage::kKeyAgreement) return;
              for (const auto& es : *sealed) {
                if (!is_active(es.recipient)) continue;
                send(node(id), es.to_message(), es.recipient);
              }
              maybe_key_agreement(node(id));
            });
  }

  void adversary_key_agreement(Node& n) {
    if (n.ka_started) return;
    n.ka_started = true;
    std::vector<std::string> peers;
    for (const auto& id : active_)
      if (id != n.id) peers.push_back(id);
    for (const auto& es : adv_->key_agreement(n.id, peers, view(), adv_rng_))
      send(n, es.to_message(), es.recipient);
  }

  void on_encrypted(Node& rx, const wire::Message& msg) {
    if (stage_ != Stage::kKeyAgreement || !rx.state || rx.ka_finished) return;
    if (!is_active(msg.member_id)) return;
    EncryptedShare es;
    try {
      es = EncryptedShare::from_message(msg, rx.id);
    } catch (const Error&) {
      return;
    }
    for (const auto& prev : rx.incoming)
      if (prev.sender == es.sender) return;
    rx.incoming.push_back(std::move(es));
    maybe_key_agreement(rx);
  }

  void maybe_key_agreement(Node& n) {
    if (n.ka_finished || !n.ka_started || n.incoming.size() + 1 < active_.size()) return;
    n.ka_finished = true;
    auto result = std::make_shared<KeyAgreementResult>();
    compute(n, [&] { *result = key_agreement_round(*n.state, n.incoming); },
            [this, id = n.id, result, r = round_] {
              if (r != round_ || stage_ != Stage::kKeyAgreement) return;
              auto& ka = report_.key_agreement;
              ka.member_status[id] = to_string(result->status);
              if (!result->offending.empty()) ka.offending[id] = result->offending;
              log(id, std::string("key agreement: ") + to_string(result->status));
              if (ka.member_status.size() == honest_active()) finish_key_agreement();
            });
  }

  void finish_key_agreement() {
    auto& ka = report_.key_agreement;
    ka.completion_time = now_;
    for (const auto& id : active_) {
      const auto& n = node(id);
      if (n.adversarial) continue;
      if (!ka.member_status.count(id)) ka.member_status[id] = "timeout";
    }
    ka.all_recovered = !ka.member_status.empty();
    std::optional<FieldElement> key;
    ka.keys_identical = true;
    for (const auto& [id, status] : ka.member_status) {
      if (status != "recovered") {
        ka.all_recovered = false;
        continue;
      }
      const auto& gk = node(id).state->group_key;
      if (!key) key = gk;
      else if (!(gk && *gk == *key)) ka.keys_identical = false;
    }
    if (!ka.all_recovered) ka.keys_identical = false;
    stage_ = Stage::kDone;
  }

  // ----- report -----------------------------------------------------------

  void finish_report() {
    if (report_.key_agreement.attempted && stage_ != Stage::kDone) finish_key_agreement();
    report_.mean_share_latency =
        latency_count_ ? latency_sum_ / static_cast<double>(latency_count_) : 0.0;
    for (const auto& n : nodes_) {
      NodeReport r;
      r.member_id = n.id;
      r.is_gm = n.is_gm;
      r.is_verifier = n.id == verifier_;
      r.adversarial = n.adversarial;
      r.tmulq_count = n.tmulq;
      r.ops = n.ops;
      r.bytes_tx = n.bytes_tx;
      r.bytes_rx = n.bytes_rx;
      r.messages = n.messages;
      r.battery = n.battery;
      r.compute_j = static_cast<double>(n.tmulq) * sc_.joules_per_tmulq;
      r.radio_j = static_cast<double>(n.bytes_tx) * sc_.radio.tx_joules_per_byte +
                  static_cast<double>(n.bytes_rx) * sc_.radio.rx_joules_per_byte;
      r.total_j = r.compute_j + r.radio_j;
      report_.nodes.push_back(std::move(r));
    }
  }

  const Scenario& sc_;
  Adversary* adv_;
  Rng rng_;
  Rng loss_rng_;
  Rng adv_rng_;
  SimReport report_;

  std::optional<GroupConfig> config_;
  std::vector<Share> gm_shares_;
  std::optional<harn::Setup> harn_;
  std::vector<FieldElement> xs_;

  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> participants_;
  std::vector<std::string> intruders_;
  std::vector<std::string> active_;
  std::string verifier_;

  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  double channel_free_at_ = 0.0;

  Stage stage_ = Stage::kConfirm;
  std::size_t round_ = 0;
  double round_start_ = 0.0;
  double ka_start_ = 0.0;
  std::string last_failure_;
  std::map<std::string, bool> verdicts_;
  std::map<std::string, std::optional<PublicShare>> collected_;
  bool collected_invalid_ = false;
  std::map<std::string, PublicShare> seen_public_;
  std::map<std::string, double> arrivals_;
  std::size_t pending_ = 0;
  double latency_sum_ = 0.0;
  std::size_t latency_count_ = 0;
  std::vector<harn::Release> harn_received_;
  std::size_t member_checks_done_ = 0;
  bool member_product_failed_ = false;
  bool gm_checks_done_ = false;
  bool gm_product_ok_ = false;
};

}  // namespace

SimReport run(const Scenario& scenario, Adversary* adversary,
              const std::optional<GroupSetup>& group, const harn::Setup* harn_setup) {
  const auto problems = scenario.validate();
  if (!problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorKind::kInvalidArgument, msg);
  }
  Engine engine(scenario, adversary, group, harn_setup);
  return engine.run();
}

NodeReport SimReport::typical_member() const {
  auto pick = [&](bool skip_verifier) {
    std::vector<const NodeReport*> out;
    for (const auto& n : nodes)
      if (!n.is_gm && !n.adversarial && !(skip_verifier && n.is_verifier)) out.push_back(&n);
    return out;
  };
  auto members = pick(true);
  if (members.empty()) members = pick(false);
  NodeReport mean;
  mean.member_id = "mean";
  if (members.empty()) return mean;
  const double k = static_cast<double>(members.size());
  double tmulq = 0, tx = 0, rx = 0, msgs = 0, battery = 0;
  for (const auto* n : members) {
    tmulq += static_cast<double>(n->tmulq_count);
    tx += static_cast<double>(n->bytes_tx);
    rx += static_cast<double>(n->bytes_rx);
    msgs += static_cast<double>(n->messages);
    battery += n->battery;
    mean.compute_j += n->compute_j / k;
    mean.radio_j += n->radio_j / k;
    mean.total_j += n->total_j / k;
    mean.ops += n->ops;
  }
  mean.tmulq_count = static_cast<std::uint64_t>(std::llround(tmulq / k));
  mean.bytes_tx = static_cast<std::uint64_t>(std::llround(tx / k));
  mean.bytes_rx = static_cast<std::uint64_t>(std::llround(rx / k));
  mean.messages = static_cast<std::uint64_t>(std::llround(msgs / k));
  mean.battery = battery / k;
  return mean;
}

cost::CsvRow SimReport::csv_row() const {
  const auto typical = typical_member();
  cost::CsvRow row;
  row.scheme = std::string(to_string(scheme));
  row.m = m;
  row.tmulq = typical.tmulq_count;
  row.energy = {typical.compute_j, typical.radio_j, typical.total_j};
  if (outcome.authenticated) row.auth_time_s = auth_time;
  return row;
}

std::string SimReport::to_json(bool include_events) const {
  json j;
  j["scheme"] = std::string(to_string(scheme));
  j["m"] = m;
  j["t"] = t;
  j["outcome"] = outcome.authenticated ? "authenticated" : "failed(" + outcome.reason + ")";
  j["auth_time_s"] = outcome.authenticated ? json(auth_time) : json(nullptr);
  j["rounds"] = rounds;
  j["excluded"] = excluded;
  j["rejected"] = rejected;
  j["verifier"] = verifier_id;
  j["max_verifier_queue"] = max_verifier_queue;
  j["dropped_at_verifier"] = dropped_at_verifier;
  j["mean_share_latency_s"] = mean_share_latency;
  j["channel_bytes_offered"] = channel_bytes_offered;
  j["channel_bytes_delivered"] = channel_bytes_delivered;
  const auto typical = typical_member();
  j["member"] = {{"tmulq", typical.tmulq_count},
                 {"compute_J", typical.compute_j},
                 {"radio_J", typical.radio_j},
                 {"total_J", typical.total_j}};
  json nodes_j = json::array();
  for (const auto& n : nodes) {
    nodes_j.push_back({{"id", n.member_id},
                       {"gm", n.is_gm},
                       {"verifier", n.is_verifier},
                       {"adversarial", n.adversarial},
                       {"tmulq", n.tmulq_count},
                       {"scalar_mul", n.ops.scalar_mul},
                       {"weighted_mul", n.ops.weighted_mul},
                       {"bytes_tx", n.bytes_tx},
                       {"bytes_rx", n.bytes_rx},
                       {"messages", n.messages},
                       {"battery", n.battery},
                       {"compute_J", n.compute_j},
                       {"radio_J", n.radio_j},
                       {"total_J", n.total_j}});
  }
  j["nodes"] = std::move(nodes_j);
  if (key_agreement.attempted) {
    j["key_agreement"] = {{"completion_time_s", key_agreement.completion_time},
                          {"status", key_agreement.member_status},
                          {"offending", key_agreement.offending},
                          {"all_recovered", key_agreement.all_recovered},
                          {"keys_identical", key_agreement.keys_identical}};
  }
  if (include_events) {
    json ev = json::array();
    for (const auto& e : events) ev.push_back({{"t", e.time}, {"node", e.node}, {"event", e.what}});
    j["events"] = std::move(ev);
  }
  return j.dump(2);
}

std::vector<SimReport> sweep(std::span<const Scheme> schemes, std::span<const std::size_t> ms,
                             const Scenario& base, unsigned jobs) {
  std::vector<Scenario> runs;
  for (const auto scheme : schemes) {
    for (const auto m : ms) {
      Scenario s = base;
      s.scheme = scheme;
      s.m = m;
      s.n = 0;
      s.battery.clear();
      if (s.t > m) s.t = 0;
      if (scheme != Scheme::kProposedDecentralized) s.verifier_policy = VerifierPolicy::kGm;
      else if (s.verifier_policy == VerifierPolicy::kGm) s.verifier_policy.reset();
      if (scheme == Scheme::kHarn) s.key_agreement = false;
      s.seed = mix(base.seed, m * 8 + static_cast<std::size_t>(scheme));
      runs.push_back(std::move(s));
    }
  }
  std::vector<std::optional<SimReport>> out(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        out[i] = run(runs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(runs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<SimReport> reports;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    reports.push_back(std::move(*out[i]));
  }
  return reports;
}

double calibrate_compute_rate(const Scenario& base, double target_seconds) {
  if (!(target_seconds > 0)) throw Error(ErrorKind::kInvalidArgument, "target must be positive");
  auto time_at = [&](double rate) {
    Scenario s = base;
    s.compute_rate = rate;
    if (s.gm_compute_rate > 0) s.gm_compute_rate = rate * (base.gm_compute_rate / base.compute_rate);
    const auto r = run(s);
    if (!r.outcome.authenticated)
      throw Error(ErrorKind::kInvalidArgument, "calibration run did not authenticate");
    return r.auth_time;
  };
  // auth_time is affine in 1/rate as long as the event order is unchanged;
  // secant steps in that variable converge in one or two iterations.
  double u0 = 1.0 / 1000.0, u1 = 1.0 / 2000.0;
  double f0 = time_at(1.0 / u0) - target_seconds;
  double f1 = time_at(1.0 / u1) - target_seconds;
  for (int it = 0; it < 8 && std::fabs(f1) > 1e-12 * target_seconds; ++it) {
    if (f1 == f0) break;
    const double u2 = u1 - f1 * (u1 - u0) / (f1 - f0);
    if (!(u2 > 0)) throw Error(ErrorKind::kInvalidArgument, "target below transmission time");
    u0 = u1;
    f0 = f1;
    u1 = u2;
    f1 = time_at(1.0 / u1) - target_seconds;
  }
  return 1.0 / u1;
}

double calibrate_joules_per_tmulq(const Scenario& base, double target_joules) {
  const auto r = run(base);
  const auto member = r.typical_member();
  return cost::calibrate_joules_per_tmulq(target_joules, member.tmulq_count, member.radio_j);
}

std::vector<Scenario> preset(std::string_view name) {
  std::size_t m = 0;
  if (name == "paper-fig3") m = 10;
  else if (name == "paper-fig4") m = 50;
  else
    throw Error(ErrorKind::kInvalidArgument,
                "unknown preset '" + std::string(name) + "' (expected paper-fig3, paper-fig4)");
  std::vector<Scenario> out;
  for (const auto scheme :
       {Scheme::kHarn, Scheme::kProposedCentralized, Scheme::kProposedDecentralized}) {
    Scenario s;
    s.scheme = scheme;
    s.m = m;
    out.push_back(s);
  }
  return out;
}

void write_csv(std::ostream& out, std::span<const SimReport> reports) {
  cost::write_csv_header(out);
  for (const auto& r : reports) cost::write_csv_row(out, r.csv_row());
}

}  // namespace lwgas::sim
