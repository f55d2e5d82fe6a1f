// SPDX-License-Identifier: Apache-2.0
#include "rislink/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rislink {

std::string format_double(double value) {
  char buf[40];
  // %.12g keeps every value in this project round-trip stable while
  // avoiding the noise digits of %.17g.
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void SerCurve::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SerPoint& p = points[i];
    if (!(p.ser >= 0.0 && p.ser <= 1.0)) {
      throw std::invalid_argument("SerCurve " + scheme + ": ser out of [0, 1]");
    }
    if (p.n_errors > p.n_symbols) {
      throw std::invalid_argument("SerCurve " + scheme + ": n_errors > n_symbols");
    }
    if (i > 0 && !(points[i - 1].snr_db < p.snr_db)) {
      throw std::invalid_argument("SerCurve " + scheme + ": snr_db not strictly increasing");
    }
  }
}

void write_ser_csv(std::ostream& os, const std::vector<SerCurve>& curves) {
  os << "scheme,snr_db,ser,n_symbols,n_errors\n";
  for (const SerCurve& c : curves) {
    c.validate();
    for (const SerPoint& p : c.points) {
      os << c.scheme << ',' << format_double(p.snr_db) << ',' << format_double(p.ser) << ','
         << p.n_symbols << ',' << p.n_errors << "\n";
    }
  }
}

std::vector<SerCurve> read_ser_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "scheme,snr_db,ser,n_symbols,n_errors") {
    throw std::runtime_error("read_ser_csv: missing or unexpected header");
  }
  std::map<std::string, std::size_t> index;
  std::vector<SerCurve> curves;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string scheme, field;
    SerPoint p;
    if (!std::getline(row, scheme, ',')) throw std::runtime_error("read_ser_csv: bad row");
    std::getline(row, field, ',');
    p.snr_db = std::stod(field);
    std::getline(row, field, ',');
    p.ser = std::stod(field);
    std::getline(row, field, ',');
    p.n_symbols = std::stoull(field);
    std::getline(row, field, ',');
    p.n_errors = std::stoull(field);
    auto [it, inserted] = index.try_emplace(scheme, curves.size());
    if (inserted) curves.push_back(SerCurve{scheme, {}});
    curves[it->second].points.push_back(p);
  }
  for (SerCurve& c : curves) c.validate();
  return curves;
}

std::optional<double> snr_at_target_ser(const SerCurve& curve, double target_ser) {
  if (!(target_ser > 0.0)) return std::nullopt;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const SerPoint& a = curve.points[i];
    const SerPoint& b = curve.points[i + 1];
    if (a.ser <= 0.0) continue;
    if (a.ser >= target_ser && b.ser <= target_ser) {
      if (a.ser == target_ser) return a.snr_db;
      if (b.ser <= 0.0) continue;  // cannot log-interpolate into an exact zero
      if (b.ser == target_ser) return b.snr_db;
      const double la = std::log10(a.ser);
      const double lb = std::log10(b.ser);
      const double lt = std::log10(target_ser);
      return a.snr_db + (b.snr_db - a.snr_db) * (la - lt) / (la - lb);
    }
  }
  return std::nullopt;
}

std::vector<GainRow> compute_gains(const std::vector<SerCurve>& curves,
                                   const std::vector<double>& target_sers,
                                   const std::vector<double>& l_o_list_db,
                                   const std::string& ris_scheme) {
  auto find = [&curves](const std::string& name) -> const SerCurve* {
    for (const SerCurve& c : curves) {
      if (c.scheme == name) return &c;
    }
    return nullptr;
  };
  const SerCurve* ris = find(ris_scheme);
  if (ris == nullptr) throw std::runtime_error("compute_gains: missing curve " + ris_scheme);

  std::vector<GainRow> rows;
  for (double target : target_sers) {
    const std::optional<double> snr_ris = snr_at_target_ser(*ris, target);
    for (double l_o : l_o_list_db) {
      std::ostringstream name;
      name << "direct_qpsk_lo" << format_double(l_o);
      const SerCurve* direct = find(name.str());
      if (direct == nullptr) throw std::runtime_error("compute_gains: missing curve " + name.str());
      GainRow row{target, l_o, std::nullopt};
      const std::optional<double> snr_direct = snr_at_target_ser(*direct, target);
      if (snr_ris && snr_direct) row.gain_db = *snr_direct - *snr_ris;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_gains_csv(std::ostream& os, const std::vector<GainRow>& rows) {
  os << "target_ser,l_o_db,gain_db\n";
  for (const GainRow& r : rows) {
    os << format_double(r.target_ser) << ',' << format_double(r.l_o_db) << ','
       << (r.gain_db ? format_double(*r.gain_db) : std::string("NA")) << "\n";
  }
}

double ser_confidence_halfwidth(double ser, std::uint64_t n_symbols) {
  if (n_symbols == 0) return 0.0;
  return 1.959963984540054 * std::sqrt(ser * (1.0 - ser) / static_cast<double>(n_symbols));
}

}  // namespace rislink
