#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace lwgas::cost {

enum class Scheme { kHarn, kChien, kProposed };

/// Which slope to use for Harn: the prose figure (45m + 1418) or the table
/// figure (14m + 1418). The two sources disagree; both are kept.
enum class HarnSlope { kText, kTable };

inline constexpr std::uint64_t kTemInTmulp = 29;
inline constexpr std::uint64_t kTmulpInTmulq = 41;
inline constexpr std::uint64_t kTemInTmulq = kTemInTmulp * kTmulpInTmulq;  // 1189

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);
HarnSlope parse_harn_slope(std::string_view name);

/// Per-user authentication cost in reference-field multiplications.
/// Throws for m == 0.
std::uint64_t per_user_cost(Scheme scheme, std::uint64_t m, HarnSlope slope = HarnSlope::kText);

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Exact a/b >= c/d.
  bool at_least(std::uint64_t c, std::uint64_t d) const { return num * d >= c * den; }
};

/// 1 - cost(proposed) / cost(chien), exact.
Fraction savings_ratio(std::uint64_t m);

struct RadioCosts {
  double tx_joules_per_byte = 0.0;
  double rx_joules_per_byte = 0.0;
};

struct Traffic {
  std::uint64_t bytes_tx = 0;
  std::uint64_t bytes_rx = 0;
};

/// One broadcast of `message_bytes` out, m - 1 peer messages in.
Traffic member_traffic(std::uint64_t m, std::uint64_t message_bytes);

struct Energy {
  double compute_j = 0.0;
  double radio_j = 0.0;
  double total_j = 0.0;
};

/// compute = tmulq * joules_per_tmulq, radio = bytes * per-byte cost.
/// Throws for non-positive joules_per_tmulq or negative radio costs.
Energy energy_for(std::uint64_t tmulq, double joules_per_tmulq, const RadioCosts& radio,
                  const Traffic& traffic);
Energy energy(Scheme scheme, std::uint64_t m, double joules_per_tmulq, const RadioCosts& radio,
              const Traffic& traffic, HarnSlope slope = HarnSlope::kText);

/// joules_per_tmulq such that tmulq * j + radio_j == target_j.
double calibrate_joules_per_tmulq(double target_j, std::uint64_t tmulq, double radio_j);

/// scheme,m,tmulq,compute_J,radio_J,total_J,auth_time_s
struct CsvRow {
  std::string scheme;
  std::uint64_t m = 0;
  std::uint64_t tmulq = 0;
  Energy energy;
  std::optional<double> auth_time_s;
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const CsvRow& row);

}  // namespace lwgas::cost
