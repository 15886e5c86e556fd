#include "lwgas/cost_model.hpp"

#include <cstdio>

#include "lwgas/error.hpp"

namespace lwgas::cost {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kHarn: return "harn";
    case Scheme::kChien: return "chien";
    case Scheme::kProposed: return "proposed";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "harn") return Scheme::kHarn;
  if (name == "chien") return Scheme::kChien;
  if (name == "proposed") return Scheme::kProposed;
  throw Error(ErrorKind::kInvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

HarnSlope parse_harn_slope(std::string_view name) {
  if (name == "text") return HarnSlope::kText;
  if (name == "table") return HarnSlope::kTable;
  throw Error(ErrorKind::kInvalidArgument, "harn slope must be 'text' or 'table'");
}

std::uint64_t per_user_cost(Scheme scheme, std::uint64_t m, HarnSlope slope) {
  if (m == 0) throw Error(ErrorKind::kInvalidArgument, "group size must be at least 1");
  switch (scheme) {
    case Scheme::kHarn: return (slope == HarnSlope::kText ? 45 : 14) * m + 1418;
    case Scheme::kChien: return 7 * m + 6785;
    case Scheme::kProposed: return kTemInTmulq;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown scheme");
}

Fraction savings_ratio(std::uint64_t m) {
  const auto chien = per_user_cost(Scheme::kChien, m);
  return Fraction{chien - per_user_cost(Scheme::kProposed, m), chien};
}

Traffic member_traffic(std::uint64_t m, std::uint64_t message_bytes) {
  if (m == 0) throw Error(ErrorKind::kInvalidArgument, "group size must be at least 1");
  return Traffic{message_bytes, (m - 1) * message_bytes};
}

Energy energy_for(std::uint64_t tmulq, double joules_per_tmulq, const RadioCosts& radio,
                  const Traffic& traffic) {
  if (!(joules_per_tmulq > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "joules per multiplication must be positive");
  }
  if (radio.tx_joules_per_byte < 0.0 || radio.rx_joules_per_byte < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "radio costs must be non-negative");
  }
  Energy e;
  e.compute_j = static_cast<double>(tmulq) * joules_per_tmulq;
  e.radio_j = static_cast<double>(traffic.bytes_tx) * radio.tx_joules_per_byte +
              static_cast<double>(traffic.bytes_rx) * radio.rx_joules_per_byte;
  e.total_j = e.compute_j + e.radio_j;
  return e;
}

Energy energy(Scheme scheme, std::uint64_t m, double joules_per_tmulq, const RadioCosts& radio,
              const Traffic& traffic, HarnSlope slope) {
  return energy_for(per_user_cost(scheme, m, slope), joules_per_tmulq, radio, traffic);
}

double calibrate_joules_per_tmulq(double target_j, std::uint64_t tmulq, double radio_j) {
  if (tmulq == 0) throw Error(ErrorKind::kInvalidArgument, "cannot calibrate on zero work");
  const double j = (target_j - radio_j) / static_cast<double>(tmulq);
  if (!(j > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "radio energy alone exceeds the calibration target");
  }
  return j;
}

void write_csv_header(std::ostream& out) {
  out << "scheme,m,tmulq,compute_J,radio_J,total_J,auth_time_s\n";
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%.9g,%.9g,%.9g,",
                static_cast<unsigned long long>(row.m), static_cast<unsigned long long>(row.tmulq),
                row.energy.compute_j, row.energy.radio_j, row.energy.total_j);
  out << row.scheme << ',' << buf;
  if (row.auth_time_s) {
    std::snprintf(buf, sizeof buf, "%.9g", *row.auth_time_s);
    out << buf;
  }
  out << '\n';
}

}  // namespace lwgas::cost
