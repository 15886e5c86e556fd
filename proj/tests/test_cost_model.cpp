#include <gtest/gtest.h>

#include <sstream>

#include "lwgas/cost_model.hpp"

namespace lwgas::cost {
namespace {

TEST(CostModel, PerUserExamples) {
  EXPECT_EQ(per_user_cost(Scheme::kProposed, 50), 1189u);
  EXPECT_EQ(per_user_cost(Scheme::kChien, 10), 6855u);
  EXPECT_EQ(per_user_cost(Scheme::kHarn, 10), 1868u);
  EXPECT_EQ(per_user_cost(Scheme::kHarn, 10, HarnSlope::kTable), 1558u);
  EXPECT_EQ(kTemInTmulq, 29u * 41u);
  EXPECT_THROW((void)per_user_cost(Scheme::kProposed, 0), std::exception);
}

TEST(CostModel, ParseNames) {
  EXPECT_EQ(parse_scheme("harn"), Scheme::kHarn);
  EXPECT_EQ(parse_scheme("chien"), Scheme::kChien);
  EXPECT_EQ(parse_scheme("proposed"), Scheme::kProposed);
  EXPECT_EQ(to_string(Scheme::kChien), "chien");
  EXPECT_THROW((void)parse_scheme("schnorr"), std::exception);
  EXPECT_EQ(parse_harn_slope("table"), HarnSlope::kTable);
  EXPECT_EQ(parse_harn_slope("text"), HarnSlope::kText);
  EXPECT_THROW((void)parse_harn_slope("median"), std::exception);
}

TEST(CostModel, CalibratedEnergyAtTen) {
  const double j = calibrate_joules_per_tmulq(0.014, 1189, 0.0);
  const RadioCosts none{};
  const Traffic t{};
  auto proposed = energy(Scheme::kProposed, 10, j, none, t);
  auto harn = energy(Scheme::kHarn, 10, j, none, t);
  auto chien = energy(Scheme::kChien, 10, j, none, t);
  EXPECT_NEAR(proposed.total_j, 0.014, 1e-12);
  EXPECT_LT(proposed.total_j, harn.total_j);
  EXPECT_LT(harn.total_j, chien.total_j);
  EXPECT_NEAR(harn.total_j / proposed.total_j, 1868.0 / 1189.0, 1e-9);
}

TEST(CostModel, CalibrationWithRadio) {
  const double j = calibrate_joules_per_tmulq(0.014, 1189, 0.004);
  EXPECT_NEAR(j * 1189 + 0.004, 0.014, 1e-12);
  EXPECT_THROW((void)calibrate_joules_per_tmulq(0.001, 1189, 0.004), std::exception);
}

TEST(CostModel, ZeroRadioIsProportional) {
  const RadioCosts none{};
  for (std::uint64_t m : {1u, 10u, 77u}) {
    for (Scheme s : {Scheme::kHarn, Scheme::kChien, Scheme::kProposed}) {
      auto e = energy(s, m, 2e-6, none, member_traffic(m, 50));
      EXPECT_DOUBLE_EQ(e.radio_j, 0.0);
      EXPECT_DOUBLE_EQ(e.total_j, static_cast<double>(per_user_cost(s, m)) * 2e-6);
    }
  }
}

TEST(CostModel, ProposedComputeConstant) {
  const RadioCosts radio{4e-7, 3.2e-7};
  auto a = energy(Scheme::kProposed, 10, 1e-5, radio, member_traffic(10, 50));
  auto b = energy(Scheme::kProposed, 50, 1e-5, radio, member_traffic(50, 50));
  EXPECT_DOUBLE_EQ(a.compute_j, b.compute_j);
  EXPECT_LT(a.radio_j, b.radio_j);
}

TEST(CostModel, RadioComponent) {
  auto t = member_traffic(10, 50);
  EXPECT_EQ(t.bytes_tx, 50u);
  EXPECT_EQ(t.bytes_rx, 450u);
  auto e = energy_for(100, 1e-5, {1e-6, 2e-6}, t);
  EXPECT_DOUBLE_EQ(e.compute_j, 1e-3);
  EXPECT_DOUBLE_EQ(e.radio_j, 50 * 1e-6 + 450 * 2e-6);
  EXPECT_DOUBLE_EQ(e.total_j, e.compute_j + e.radio_j);
}

TEST(CostModel, RejectsNonPositiveConstants) {
  EXPECT_THROW((void)energy_for(1, 0.0, {}, {}), std::exception);
  EXPECT_THROW((void)energy_for(1, -1.0, {}, {}), std::exception);
  EXPECT_THROW((void)energy_for(1, 1.0, {-1.0, 0.0}, {}), std::exception);
}

TEST(CostModel, SavingsExamples) {
  EXPECT_NEAR(savings_ratio(10).value(), 1.0 - 1189.0 / 6855.0, 1e-12);
  EXPECT_NEAR(savings_ratio(10).value(), 0.827, 5e-4);
  EXPECT_NEAR(savings_ratio(50).value(), 0.833, 5e-4);
  EXPECT_NEAR(savings_ratio(1).value(), 0.825, 5e-4);
  auto f = savings_ratio(10);
  EXPECT_EQ(f.num, 6855u - 1189u);
  EXPECT_EQ(f.den, 6855u);
}

TEST(CostModel, CsvGolden) {
  std::ostringstream out;
  write_csv_header(out);
  write_csv_row(out, CsvRow{"proposed", 10, 1189, Energy{0.014, 0.0, 0.014}, 1.3});
  write_csv_row(out, CsvRow{"chien", 10, 6855, Energy{0.1, 0.0, 0.1}, std::nullopt});
  std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "scheme,m,tmulq,compute_J,radio_J,total_J,auth_time_s");
  EXPECT_NE(text.find("\nproposed,10,1189,"), std::string::npos);
  EXPECT_NE(text.find("\nchien,10,6855,"), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  auto last = text.substr(text.rfind("chien"));
  EXPECT_EQ(last.back(), '\n');
  EXPECT_EQ(last[last.size() - 2], ',');  // empty auth time
}

// --- properties ------------------------------------------------------------

TEST(CostModelProperty, Shapes) {
  for (std::uint64_t m = 1; m <= 1000; ++m) {
    ASSERT_EQ(per_user_cost(Scheme::kProposed, m), 1189u);
    ASSERT_EQ(per_user_cost(Scheme::kHarn, m + 1) - per_user_cost(Scheme::kHarn, m), 45u);
    ASSERT_EQ(per_user_cost(Scheme::kHarn, m + 1, HarnSlope::kTable) -
                  per_user_cost(Scheme::kHarn, m, HarnSlope::kTable),
              14u);
    ASSERT_EQ(per_user_cost(Scheme::kChien, m + 1) - per_user_cost(Scheme::kChien, m), 7u);
    ASSERT_TRUE(savings_ratio(m).at_least(80, 100));
  }
}

}  // namespace
}  // namespace lwgas::cost
