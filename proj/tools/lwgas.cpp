// lwgas: command-line front end for the group authentication library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lwgas/attacks.hpp"
#include "lwgas/cost_model.hpp"
#include "lwgas/gas.hpp"
#include "lwgas/harn.hpp"
#include "lwgas/sim.hpp"

using namespace lwgas;

namespace {

constexpr int kExitFailure = 1;  // protocol or scenario outcome was negative
constexpr int kExitUsage = 2;    // bad flags, missing files, invalid parameters

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GAS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, "GAS_SEED is not an unsigned integer");
    }
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << text;
}

std::string point_str(const CurvePoint& p) {
  std::ostringstream ss;
  ss << p;
  return ss.str();
}

std::string short_hex(std::span<const std::uint8_t> b) {
  auto h = to_hex(b);
  return h.size() > 16 ? h.substr(0, 16) + "..." : h;
}

// ---------------------------------------------------------------------------
// demo

struct DemoArgs {
  std::string scheme = "proposed";
  std::string mode = "centralized";
  std::size_t t = 3, n = 5, m = 4;
  std::string curve = "builtin:test2017";
  std::uint64_t seed = 0;
};

int demo_proposed(const DemoArgs& a, std::ostream& out) {
  const auto curve = load_curve(a.curve);
  Rng rng(a.seed);
  InitOptions io;
  io.curve_ref = a.curve;
  auto init = gm_init(a.t, a.n, curve, rng, io);
  const auto& cfg = init.config;
  out << "[init] curve " << curve.name() << ", share field q = " << to_decimal(curve.scalar_order())
      << "\n";
  out << "[init] P = " << point_str(cfg.P) << "\n";
  out << "[init] Q = sP = " << point_str(cfg.Q) << "\n";
  out << "[init] H(s) = " << to_hex(cfg.commitment.digest) << "\n";
  out << "[init] t = " << a.t << ", n = " << a.n << ", m = " << a.m << "\n";
  for (const auto& sh : init.shares)
    out << "[init] " << sh.member_id << " receives x = " << sh.x << " and f(x)\n";

  std::vector<MemberState> members;
  for (std::size_t i = 0; i < a.m; ++i) members.push_back(make_member_state(init.shares[i], cfg));

  std::vector<PublicShare> publics;
  for (const auto& st : members) {
    publics.push_back(make_public_share(st));
    out << "[confirm] " << st.share.member_id << " broadcasts f(x)P = " << point_str(publics.back().point)
        << "\n";
  }
  for (auto& st : members)
    for (const auto& ps : publics)
      if (ps.member_id != st.share.member_id) st.received_public_shares.insert_or_assign(ps.member_id, ps);

  bool authenticated = false;
  if (a.mode == "centralized") {
    const auto verdict = gm_verify(cfg, init.shares, publics);
    for (const auto& v : verdict.verdicts)
      out << "[confirm] GM checks " << v.member_id << ": " << (v.valid ? "valid" : "invalid") << "\n";
    authenticated = verdict.all_valid();
  } else {
    authenticated = decentralized_verify(cfg, publics, publics.size());
    out << "[confirm] " << members.front().share.member_id << " checks sum of L_i(0) f(x_i)P "
        << (authenticated ? "== Q" : "!= Q") << "\n";
  }
  if (!authenticated) {
    out << "Authentication failed\n";
    return kExitFailure;
  }
  out << "Authentication is complete\n";

  std::vector<EncryptedShare> wire;
  for (auto& st : members) {
    derive_pairwise_keys(st);
    for (auto& es : seal_share_for_peers(st, rng)) {
      out << "[key] " << es.sender << " -> " << es.recipient << ": E_K[f(x)] " << short_hex(es.sealed)
          << "\n";
      wire.push_back(std::move(es));
    }
  }
  bool all = true;
  for (auto& st : members) {
    std::vector<EncryptedShare> mine;
    for (const auto& es : wire)
      if (es.recipient == st.share.member_id) mine.push_back(es);
    const auto r = key_agreement_round(st, mine);
    if (r.ok()) {
      out << "[key] " << st.share.member_id << ": H(s') matches H(s)\n";
    } else {
      out << "[key] " << st.share.member_id << ": " << to_string(r.status) << "\n";
      all = false;
    }
  }
  if (!all) {
    out << "Group Key recovery failed\n";
    return kExitFailure;
  }
  out << "Group Key is recovered\n";
  return 0;
}

int demo_harn(const DemoArgs& a, std::ostream& out) {
  Rng rng(a.seed);
  const auto group = a.curve == "tiny" ? harn::tiny_group() : harn::fixture_group();
  const auto setup = harn::harn_init(a.t, a.n, group, rng);
  out << "[init] p has " << bit_length(group.p.value()) << " bits, q has " << bit_length(group.q.value())
      << " bits\n";
  out << "[init] g^s = " << short_hex(setup.params.target.to_bytes()) << "\n";
  std::vector<FieldElement> xs;
  for (std::size_t i = 0; i < a.m; ++i) xs.push_back(setup.tokens[i].x);
  std::vector<harn::Release> released;
  for (std::size_t i = 0; i < a.m; ++i) {
    released.push_back(harn::harn_release(setup.tokens[i], xs, setup.params));
    out << "[confirm] " << released.back().member_id << " releases e = "
        << short_hex(released.back().e.to_bytes()) << "\n";
  }
  if (!harn::harn_verify(released, setup.params)) {
    out << "Authentication failed\n";
    return kExitFailure;
  }
  out << "[confirm] product of e_i == g^s\n";
  out << "Authentication is complete\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cost

std::vector<std::uint64_t> parse_range(const std::string& text) {
  std::uint64_t a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step == 0 || !in.eof())
    throw Error(ErrorKind::kInvalidArgument, "malformed range '" + text + "' (expected a:b:step)");
  std::vector<std::uint64_t> out;
  for (auto m = a; m <= b; m += step) {
    if (m > 0) out.push_back(m);
    if (b - m < step) break;
  }
  return out;
}

std::vector<std::size_t> parse_list(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::size_t> out;
    for (auto v : parse_range(text)) out.push_back(v);
    return out;
  }
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stoul(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, "bad list entry '" + item + "'");
    }
  }
  return out;
}

std::uint64_t public_share_bytes() {
  Rng rng(1);
  const auto init = gm_init(1, 1, builtin_curve("secp160r1"), rng);
  return wire::encode(encode_public_share(make_public_share(init.shares[0], init.config), init.config))
      .size();
}

// ---------------------------------------------------------------------------
// simulate / sweep

struct SimFlags {
  std::string scheme;
  std::size_t m = 0, t = 0, n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> loss;
  std::string curve;
  std::string schedule;
  std::string policy;
  std::string fixed;
  std::optional<std::size_t> buffer;
  bool key_agreement = false;
  std::optional<double> rate;
  std::optional<double> jpt;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
  cmd->add_option("--scheme", f.scheme, "harn | proposed-centralized | proposed-decentralized");
  cmd->add_option("--m", f.m, "participating members");
  cmd->add_option("--t", f.t, "threshold (default m)");
  cmd->add_option("--n", f.n, "roster size (default m)");
  cmd->add_option("--seed", f.seed, "rng seed (default GAS_SEED or 1)");
  cmd->add_option("--loss", f.loss, "per-receiver frame loss probability");
  cmd->add_option("--curve", f.curve, "curve for the proposed scheme");
  cmd->add_option("--schedule", f.schedule, "simultaneous | staggered");
  cmd->add_option("--verifier-policy", f.policy, "gm | fixed | max-battery");
  cmd->add_option("--fixed-verifier", f.fixed, "member id for the fixed policy");
  cmd->add_option("--buffer", f.buffer, "verifier receive buffer (0 = unbounded)");
  cmd->add_flag("--key-agreement", f.key_agreement, "also run the key agreement stage");
  cmd->add_option("--compute-rate", f.rate, "multiplications per second per node");
  cmd->add_option("--joules-per-tmulq", f.jpt, "compute energy per multiplication");
}

void apply(const SimFlags& f, sim::Scenario& s) {
  if (!f.scheme.empty()) s.scheme = sim::parse_scheme(f.scheme);
  if (f.m) s.m = f.m;
  if (f.t) s.t = f.t;
  if (f.n) s.n = f.n;
  if (f.seed) s.seed = *f.seed;
  if (f.loss) s.loss_probability = *f.loss;
  if (!f.curve.empty()) s.curve_ref = f.curve;
  if (f.schedule == "staggered") s.schedule = sim::SendSchedule::kStaggered;
  else if (f.schedule == "simultaneous") s.schedule = sim::SendSchedule::kSimultaneous;
  else if (!f.schedule.empty())
    throw Error(ErrorKind::kInvalidArgument, "unknown schedule '" + f.schedule + "'");
  if (!f.policy.empty()) s.verifier_policy = sim::parse_verifier_policy(f.policy);
  if (!f.fixed.empty()) s.fixed_verifier = f.fixed;
  if (f.buffer) s.verifier_queue_capacity = *f.buffer;
  if (f.key_agreement) s.key_agreement = true;
  if (f.rate) s.compute_rate = *f.rate;
  if (f.jpt) s.joules_per_tmulq = *f.jpt;
}

void check(const sim::Scenario& s) {
  const auto problems = s.validate();
  if (problems.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw Error(ErrorKind::kInvalidArgument, msg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightweight group authentication: demo, cost model, simulator, attacks"};
  app.require_subcommand(1);

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "Run one group authentication end to end");
  demo_cmd->add_option("--scheme", demo.scheme, "proposed | harn")->check(CLI::IsMember({"proposed", "harn"}));
  demo_cmd->add_option("--mode", demo.mode, "centralized | decentralized")
      ->check(CLI::IsMember({"centralized", "decentralized"}));
  demo_cmd->add_option("--t", demo.t, "threshold");
  demo_cmd->add_option("--n", demo.n, "group size");
  demo_cmd->add_option("--m", demo.m, "participating members");
  demo_cmd->add_option("--curve", demo.curve, "curve file or builtin:<name> (harn: fixture | tiny)");
  std::optional<std::uint64_t> demo_seed;
  demo_cmd->add_option("--seed", demo_seed, "rng seed (default GAS_SEED or 1)");

  std::string m_range;
  std::string slope = "text";
  std::optional<double> cost_jpt;
  auto* cost_cmd = app.add_subcommand("cost", "Per-member cost and energy table as CSV");
  cost_cmd->add_option("--m-range", m_range, "a:b:step")->required();
  cost_cmd->add_option("--harn-slope", slope, "text | table")->check(CLI::IsMember({"text", "table"}));
  cost_cmd->add_option("--joules-per-tmulq", cost_jpt, "compute energy per multiplication");

  std::string scenario_file, preset_name, events_file, report_file;
  SimFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate one scenario (or a preset) and print CSV");
  sim_cmd->add_option("--scenario", scenario_file, "scenario JSON file");
  sim_cmd->add_option("--preset", preset_name, "paper-fig3 | paper-fig4");
  sim_cmd->add_option("--events", events_file, "write the JSON report with event log to this path");
  add_sim_flags(sim_cmd, sim_flags);

  std::string sweep_schemes = "harn,proposed-centralized,proposed-decentralized";
  std::string sweep_ms = "10,20,30,40,50";
  unsigned jobs = 1;
  std::string sweep_scenario;
  SimFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "One run per (scheme, m) as CSV");
  sweep_cmd->add_option("--schemes", sweep_schemes, "comma-separated scheme names");
  sweep_cmd->add_option("--m-list", sweep_ms, "comma list or a:b:step");
  sweep_cmd->add_option("--jobs", jobs, "parallel runs (output order is fixed)");
  sweep_cmd->add_option("--scenario", sweep_scenario, "base scenario JSON file");
  add_sim_flags(sweep_cmd, sweep_flags);

  std::string attack_name;
  bool rotate = false, no_rotate = false;
  std::string dos_mode = "both";
  std::size_t attackers = 1;
  std::string victim;
  std::size_t att_m = 0, att_t = 0, att_n = 0, buffer = 4;
  std::optional<std::uint64_t> att_seed;
  auto* att_cmd = app.add_subcommand("attack", "Run an adversary scenario and print findings JSON");
  att_cmd->add_option("--name", attack_name, "scenario name")->required();
  att_cmd->add_flag("--rotate", rotate, "replay: only the rotated case");
  att_cmd->add_flag("--no-rotate", no_rotate, "replay: only the unrotated case");
  att_cmd->add_option("--mode", dos_mode, "dos-invalid-share: centralized | decentralized | both")
      ->check(CLI::IsMember({"centralized", "decentralized", "both"}));
  att_cmd->add_option("--attackers", attackers, "dos-invalid-share: attacker count");
  att_cmd->add_option("--victim", victim, "replay / node-compromise: target member id");
  att_cmd->add_option("--m", att_m, "participating members");
  att_cmd->add_option("--t", att_t, "threshold");
  att_cmd->add_option("--n", att_n, "group size");
  att_cmd->add_option("--buffer", buffer, "verifier-flooding: receive buffer");
  att_cmd->add_option("--seed", att_seed, "rng seed (default GAS_SEED or 1)");

  std::string gen_kind = "harn";
  std::size_t p_bits = 1024, q_bits = 160, gen_t = 3, gen_n = 5;
  std::string gen_curve = "builtin:secp160r1", out_config, out_shares;
  std::optional<std::uint64_t> gen_seed;
  auto* gen_cmd = app.add_subcommand("gen-params", "Generate Harn group or proposed-scheme group material");
  gen_cmd->add_option("--kind", gen_kind, "harn | group")->check(CLI::IsMember({"harn", "group"}));
  gen_cmd->add_option("--p-bits", p_bits, "harn: bits of p");
  gen_cmd->add_option("--q-bits", q_bits, "harn: bits of q");
  gen_cmd->add_option("--t", gen_t, "group: threshold");
  gen_cmd->add_option("--n", gen_n, "group: members");
  gen_cmd->add_option("--curve", gen_curve, "group: curve file or builtin:<name>");
  gen_cmd->add_option("--out-config", out_config, "group: write the public config here");
  gen_cmd->add_option("--out-shares", out_shares, "group: write the member shares here (JSONL)");
  gen_cmd->add_option("--seed", gen_seed, "rng seed (default GAS_SEED or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*demo_cmd) {
      demo.seed = demo_seed ? *demo_seed : default_seed();
      if (demo.t == 0 || demo.t > demo.m || demo.m > demo.n)
        throw Error(ErrorKind::kBelowThreshold, "need 1 <= t <= m <= n (got t=" + std::to_string(demo.t) +
                                                    ", m=" + std::to_string(demo.m) +
                                                    ", n=" + std::to_string(demo.n) + ")");
      if (demo.scheme == "harn") {
        if (demo.curve == "builtin:test2017") demo.curve = "tiny";
        return demo_harn(demo, std::cout);
      }
      return demo_proposed(demo, std::cout);
    }

    if (*cost_cmd) {
      const auto ms = parse_range(m_range);
      const auto hs = cost::parse_harn_slope(slope);
      const double jpt = cost_jpt ? *cost_jpt : sim::kCalibratedJoulesPerTmulq;
      const cost::RadioCosts radio = sim::Scenario{}.radio;
      const auto msg = public_share_bytes();
      std::ostringstream out;
      cost::write_csv_header(out);
      for (const auto scheme : {cost::Scheme::kHarn, cost::Scheme::kChien, cost::Scheme::kProposed}) {
        for (const auto m : ms) {
          cost::CsvRow row;
          row.scheme = std::string(cost::to_string(scheme));
          row.m = m;
          row.tmulq = cost::per_user_cost(scheme, m, hs);
          row.energy = cost::energy(scheme, m, jpt, radio, cost::member_traffic(m, msg), hs);
          cost::write_csv_row(out, row);
        }
      }
      std::cout << out.str();
      return 0;
    }

    if (*sim_cmd) {
      std::vector<sim::Scenario> scenarios;
      if (!scenario_file.empty() && !preset_name.empty())
        throw Error(ErrorKind::kInvalidArgument, "--scenario and --preset are exclusive");
      if (!preset_name.empty()) {
        scenarios = sim::preset(preset_name);
      } else if (!scenario_file.empty()) {
        scenarios.push_back(sim::Scenario::from_json(read_file(scenario_file)));
      } else {
        scenarios.emplace_back();
        scenarios.back().seed = default_seed();
      }
      for (auto& s : scenarios) {
        apply(sim_flags, s);
        s.record_events = !events_file.empty();
        check(s);
      }
      std::vector<sim::SimReport> reports;
      for (const auto& s : scenarios) reports.push_back(sim::run(s));
      std::ostringstream csv;
      sim::write_csv(csv, reports);
      if (!events_file.empty()) {
        std::string text = "[\n";
        for (std::size_t i = 0; i < reports.size(); ++i)
          text += (i ? ",\n" : "") + reports[i].to_json(true);
        write_file(events_file, text + "\n]\n");
      }
      std::cout << csv.str();
      for (const auto& r : reports)
        if (!r.outcome.authenticated)
          std::cerr << "lwgas: " << sim::to_string(r.scheme) << " m=" << r.m
                    << " failed: " << r.outcome.reason << "\n";
      return 0;
    }

    if (*sweep_cmd) {
      sim::Scenario base;
      base.seed = default_seed();
      if (!sweep_scenario.empty()) base = sim::Scenario::from_json(read_file(sweep_scenario));
      apply(sweep_flags, base);
      std::vector<sim::Scheme> schemes;
      std::stringstream ss(sweep_schemes);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) schemes.push_back(sim::parse_scheme(item));
      const auto ms = parse_list(sweep_ms);
      for (const auto m : ms) {
        for (const auto scheme : schemes) {
          auto probe = base;
          probe.scheme = scheme;
          probe.m = m;
          probe.n = 0;
          probe.battery.clear();
          if (probe.t > m) probe.t = 0;
          probe.verifier_policy.reset();
          probe.key_agreement = probe.key_agreement && scheme != sim::Scheme::kHarn;
          check(probe);
        }
      }
      const auto reports = sim::sweep(schemes, ms, base, jobs);
      std::ostringstream csv;
      sim::write_csv(csv, reports);
      std::cout << csv.str();
      return 0;
    }

    if (*att_cmd) {
      const auto seed = att_seed ? *att_seed : default_seed();
      const auto& names = attacks::scenario_names();
      if (std::find(names.begin(), names.end(), attack_name) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        std::cerr << "lwgas: error: unknown attack '" << attack_name << "' (valid: " << valid << ")\n";
        return kExitUsage;
      }
      auto common = [&](attacks::CommonOptions& o) {
        o.seed = seed;
        if (att_m) o.m = att_m;
        if (att_t) o.t = att_t;
        if (att_n) o.n = att_n;
        if (o.n < o.m) o.n = o.m;
      };
      attacks::AttackReport rep;
      if (attack_name == "replay") {
        attacks::ReplayOptions o;
        common(o);
        if (!victim.empty()) o.victim = victim;
        if (rotate && no_rotate) throw Error(ErrorKind::kInvalidArgument, "--rotate and --no-rotate are exclusive");
        o.both = !rotate && !no_rotate;
        o.rotate = rotate;
        rep = attacks::replay_attack(o);
      } else if (attack_name == "dos-invalid-share") {
        attacks::DosOptions o;
        common(o);
        o.attackers = attackers;
        o.mode = dos_mode == "centralized"     ? attacks::DosOptions::Mode::kCentralized
                 : dos_mode == "decentralized" ? attacks::DosOptions::Mode::kDecentralized
                                               : attacks::DosOptions::Mode::kBoth;
        rep = attacks::dos_invalid_share(o);
      } else if (attack_name == "node-compromise") {
        attacks::CompromiseOptions o;
        common(o);
        if (!victim.empty()) o.victim = victim;
        rep = attacks::node_compromise(o);
      } else if (attack_name == "eavesdrop") {
        attacks::EavesdropOptions o;
        common(o);
        rep = attacks::eavesdrop_secrecy_check(o);
      } else {
        attacks::FloodingOptions o;
        o.seed = seed;
        if (att_m) o.m = att_m;
        o.buffer = buffer;
        rep = attacks::verifier_flooding(o);
      }
      std::cout << rep.to_json() << "\n";
      return rep.all_matched() ? 0 : kExitFailure;
    }

    if (*gen_cmd) {
      Rng rng(gen_seed ? *gen_seed : default_seed());
      if (gen_kind == "harn") {
        if (q_bits < 2 || q_bits >= p_bits)
          throw Error(ErrorKind::kInvalidArgument, "need 2 <= q-bits < p-bits");
        std::cerr << "lwgas: searching for a " << p_bits << "/" << q_bits << "-bit group\n";
        std::cout << harn::generate_group(p_bits, q_bits, rng).to_json() << "\n";
        return 0;
      }
      const auto curve = load_curve(gen_curve);
      InitOptions io;
      io.curve_ref = gen_curve;
      const auto init = gm_init(gen_t, gen_n, curve, rng, io);
      std::ostringstream shares;
      write_share_file(shares, init.shares);
      if (out_config.empty() && out_shares.empty()) {
        std::cout << init.config.to_json() << "\n";
        std::cerr << "lwgas: shares not written (pass --out-shares)\n";
        return 0;
      }
      if (!out_config.empty()) write_file(out_config, init.config.to_json() + "\n");
      else std::cout << init.config.to_json() << "\n";
      if (!out_shares.empty()) write_file(out_shares, shares.str());
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "lwgas: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lwgas: error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
