// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rislink {

/// Deterministic shortest-ish decimal rendering used for every CSV cell,
/// so reruns with equal seeds produce byte-identical files.
std::string format_double(double value);

struct SerPoint {
  double snr_db = 0.0;
  double ser = 0.0;
  std::uint64_t n_symbols = 0;  // 0 marks an analytic (non Monte Carlo) row
  std::uint64_t n_errors = 0;
};

/// One SER-vs-SNR series for a named scheme.
struct SerCurve {
  std::string scheme;
  std::vector<SerPoint> points;

  void validate() const;  // snr strictly increasing, 0<=ser<=1, errors<=symbols
};

/// Header `scheme,snr_db,ser,n_symbols,n_errors`.
void write_ser_csv(std::ostream& os, const std::vector<SerCurve>& curves);
std::vector<SerCurve> read_ser_csv(std::istream& is);

/// SNR at which the curve crosses `target_ser`, by log-linear interpolation
/// (linear in SNR dB vs log10 SER) over the first downward-crossing segment
/// with positive SER at both ends. nullopt when the target is outside the
/// curve's usable range.
std::optional<double> snr_at_target_ser(const SerCurve& curve, double target_ser);

struct GainRow {
  double target_ser = 0.0;
  double l_o_db = 0.0;
  std::optional<double> gain_db;  // nullopt -> written as NA
};

/// gain = SNR_direct(target) - SNR_ris(target) per (target, l_o) pair.
std::vector<GainRow> compute_gains(const std::vector<SerCurve>& curves,
                                   const std::vector<double>& target_sers,
                                   const std::vector<double>& l_o_list_db,
                                   const std::string& ris_scheme = "ris_ae_best");

/// Header `target_ser,l_o_db,gain_db`; unavailable rows carry NA.
void write_gains_csv(std::ostream& os, const std::vector<GainRow>& rows);

/// 95% binomial (Wald) half-width on an SER estimate, in probability.
double ser_confidence_halfwidth(double ser, std::uint64_t n_symbols);

}  // namespace rislink
