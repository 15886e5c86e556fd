#include <gtest/gtest.h>

#include <json.hpp>

#include "lwgas/attacks.hpp"

namespace lwgas {
namespace {

using attacks::AttackReport;

const attacks::Finding& finding(const AttackReport& r, const std::string& name) {
  for (const auto& f : r.findings)
    if (f.case_name == name) return f;
  throw std::runtime_error("no finding named " + name);
}

void expect_all_matched(const AttackReport& r) {
  EXPECT_FALSE(r.findings.empty());
  for (const auto& f : r.findings)
    EXPECT_TRUE(f.matched) << r.scenario << " / " << f.case_name << ": expected " << f.expected
                           << ", observed " << f.observed;
  EXPECT_TRUE(r.all_matched());
}

TEST(Attacks, ReplayBothStages) {
  attacks::ReplayOptions o;
  auto r = attacks::replay_attack(o);
  expect_all_matched(r);
  EXPECT_TRUE(finding(r, "no rotation: confirmation").matched);
  EXPECT_TRUE(finding(r, "no rotation: key agreement").matched);
  EXPECT_TRUE(finding(r, "rotation: confirmation").matched);
  EXPECT_NE(finding(r, "rotation: confirmation").observed.find("gm_verify false"), std::string::npos);
  EXPECT_TRUE(finding(r, "random point").matched);
}

TEST(Attacks, ReplayRotationOnly) {
  attacks::ReplayOptions o;
  o.both = false;
  o.rotate = true;
  o.victim = "U3";
  auto r = attacks::replay_attack(o);
  expect_all_matched(r);
  EXPECT_THROW((void)finding(r, "no rotation: confirmation"), std::runtime_error);
}

TEST(Attacks, DosDecentralizedDenied) {
  attacks::DosOptions o;
  o.mode = attacks::DosOptions::Mode::kDecentralized;
  auto r = attacks::dos_invalid_share(o);
  expect_all_matched(r);
  EXPECT_NE(finding(r, "decentralized").observed.find("denial-of-authentication"), std::string::npos);
}

TEST(Attacks, DosCentralizedIsolates) {
  attacks::DosOptions o;
  o.mode = attacks::DosOptions::Mode::kCentralized;
  auto r = attacks::dos_invalid_share(o);
  expect_all_matched(r);
  EXPECT_NE(finding(r, "centralized").observed.find("excluded=U5"), std::string::npos);
}

TEST(Attacks, DosNoAttackerBaseline) {
  attacks::DosOptions o;
  o.attackers = 0;
  auto r = attacks::dos_invalid_share(o);
  expect_all_matched(r);
  EXPECT_TRUE(finding(r, "decentralized, no attacker").matched);
  EXPECT_TRUE(finding(r, "centralized, no attacker").matched);
}

TEST(Attacks, DosTooManyAttackersForThreshold) {
  attacks::DosOptions o;
  o.attackers = 3;
  auto r = attacks::dos_invalid_share(o);
  expect_all_matched(r);
  EXPECT_EQ(finding(r, "centralized").expected, "attackers identified, honest subset below threshold");
  o.attackers = 6;
  EXPECT_THROW((void)attacks::dos_invalid_share(o), Error);
}

TEST(Attacks, NodeCompromiseSucceedsUntilRotation) {
  attacks::CompromiseOptions o;
  auto r = attacks::node_compromise(o);
  expect_all_matched(r);
  EXPECT_TRUE(finding(r, "impersonation").matched);
  EXPECT_TRUE(finding(r, "after rotation excluding the victim").matched);
  EXPECT_TRUE(finding(r, "no compromise, t-1 shares on F_257").matched);
  o.victim = "U4";
  o.seed = 9;
  expect_all_matched(attacks::node_compromise(o));
}

TEST(Attacks, EavesdropScan) {
  attacks::EavesdropOptions o;
  auto r = attacks::eavesdrop_secrecy_check(o);
  expect_all_matched(r);
  EXPECT_EQ(finding(r, "honest proposed run").observed.rfind("0 leaks", 0), 0u);
  EXPECT_TRUE(finding(r, "negative control: raw share broadcast").matched);
  EXPECT_TRUE(finding(r, "harn transcript").matched);
  EXPECT_TRUE(finding(r, "discrete-log search on the test curve").matched);
}

TEST(Attacks, VerifierFlooding) {
  attacks::FloodingOptions o;
  auto r = attacks::verifier_flooding(o);
  expect_all_matched(r);
  EXPECT_EQ(r.findings.size(), 2u);
  o.buffer = 0;
  EXPECT_EQ(attacks::verifier_flooding(o).findings.size(), 1u);
}

TEST(Attacks, FindAllAndScan) {
  Bytes hay{1, 2, 3, 1, 2, 3, 1};
  EXPECT_EQ(attacks::find_all(hay, Bytes{1, 2}), (std::vector<std::size_t>{0, 3}));
  EXPECT_TRUE(attacks::find_all(hay, Bytes{4}).empty());
  EXPECT_EQ(attacks::find_all(hay, Bytes{1}).size(), 3u);

  std::vector<sim::Frame> frames{{0.0, "U1", "", {9, 9, 7, 7}}, {1.0, "U2", "", {7, 7, 0}}};
  auto leaks = attacks::scan_transcript(frames, {{"a", Bytes{7, 7}}, {"b", Bytes{5}}});
  ASSERT_EQ(leaks.size(), 2u);
  EXPECT_EQ(leaks[0].secret, "a");
  EXPECT_EQ(leaks[0].frame, 0u);
  EXPECT_EQ(leaks[0].offset, 2u);
  EXPECT_EQ(leaks[1].frame, 1u);
}

TEST(Attacks, DlogCostGrowsWithOrder) {
  auto c = builtin_curve("test2017");
  double small = attacks::mean_dlog_steps(c, 11);
  double mid = attacks::mean_dlog_steps(c, 37);
  double large = attacks::mean_dlog_steps(c, 2035);
  EXPECT_LT(small, mid);
  EXPECT_LT(mid, large);
  EXPECT_NEAR(large / 2035, 0.5, 0.05);
}

TEST(Attacks, RegistryAndJson) {
  const auto& names = attacks::scenario_names();
  EXPECT_EQ(names.size(), 5u);
  auto r = attacks::run_by_name("verifier-flooding", 2);
  auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["scenario"], "verifier-flooding");
  EXPECT_TRUE(j["all_matched"].get<bool>());
  EXPECT_TRUE(j["findings"].is_array());
  EXPECT_TRUE(j["findings"][0].contains("expected"));
  EXPECT_TRUE(j["findings"][0].contains("observed"));
  EXPECT_THROW((void)attacks::run_by_name("bogus", 1), Error);
}

}  // namespace
}  // namespace lwgas
