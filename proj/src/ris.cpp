// SPDX-License-Identifier: Apache-2.0
#include "rislink/ris.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "rislink/report.hpp"

namespace rislink {

void Codeword::validate() const {
  if (elements.size() < 1) throw std::invalid_argument("Codeword: empty");
  for (Eigen::Index n = 0; n < elements.size(); ++n) {
    if (elements[n] != 1.0 && elements[n] != -1.0) {
      throw std::invalid_argument("Codeword: elements must be exactly +1 or -1");
    }
  }
}

void Codebook::validate() const {
  if (codewords.empty()) throw std::invalid_argument("Codebook: empty");
  if (codewords.size() != target_angles_deg.size()) {
    throw std::invalid_argument("Codebook: codeword/angle count mismatch");
  }
  const Eigen::Index n = codewords.front().size();
  for (const Codeword& cw : codewords) {
    cw.validate();
    if (cw.size() != n) throw std::invalid_argument("Codebook: inconsistent codeword length");
  }
}

double wrap_phase_deg(double phase_deg) {
  double w = std::fmod(phase_deg, 360.0);
  if (w > 180.0) w -= 360.0;
  if (w <= -180.0) w += 360.0;
  return w;
}

double quantize_phase_1bit(double phase_deg) {
  return std::abs(wrap_phase_deg(phase_deg)) <= 90.0 ? 0.0 : 180.0;
}

Eigen::VectorXd element_phases_deg(const Geometry& geometry, double azimuth_deg) {
  geometry.validate();
  const double step = 360.0 * geometry.spacing_wavelengths *
                      std::cos(azimuth_deg * std::numbers::pi / 180.0);
  return step * Eigen::VectorXd::LinSpaced(geometry.n_elements, 0.0,
                                           static_cast<double>(geometry.n_elements - 1));
}

Codeword design_codeword(const Geometry& geometry, double incident_deg, double desired_deg) {
  const Eigen::VectorXd phases =
      element_phases_deg(geometry, incident_deg) - element_phases_deg(geometry, desired_deg);
  Codeword cw{Eigen::VectorXd(geometry.n_elements)};
  for (int n = 0; n < geometry.n_elements; ++n) {
    cw.elements[n] = quantize_phase_1bit(phases[n]) == 0.0 ? 1.0 : -1.0;
  }
  return cw;
}

Codebook build_codebook(const Geometry& geometry, double incident_deg, double min_deg,
                        double max_deg, int size) {
  if (size < 2) throw std::invalid_argument("build_codebook: size must be >= 2");
  if (!(min_deg < max_deg)) throw std::invalid_argument("build_codebook: degenerate angle range");
  Codebook book;
  book.incident_angle_deg = incident_deg;
  const double step = (max_deg - min_deg) / (size - 1);
  for (int i = 0; i < size; ++i) {
    const double angle = min_deg + step * i;
    book.target_angles_deg.push_back(angle);
    book.codewords.push_back(design_codeword(geometry, incident_deg, angle));
  }
  return book;
}

ComplexVector apply_ris(const ComplexVector& x_ris, const Codeword& psi, double kappa) {
  if (x_ris.size() != psi.size()) throw std::invalid_argument("apply_ris: length mismatch");
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("apply_ris: kappa must be in (0, 1]");
  }
  return (kappa * psi.elements.cast<Complex>()).cwiseProduct(x_ris);
}

Complex cascade_amplitude(const Channel& h_tr, const Channel& h_ri, const Eigen::VectorXd& psi,
                          double kappa) {
  if (h_tr.response.size() != h_ri.response.size() || h_tr.response.size() != psi.size()) {
    throw std::invalid_argument("cascade_amplitude: dimension mismatch");
  }
  const Complex s = transpose_dot(hadamard_product(h_tr.response, h_ri.response),
                                  psi.cast<Complex>().eval());
  return kappa * h_tr.gain * h_ri.gain * s;
}

double effective_gain(const Channel& h_tr, const Channel& h_ri, const Codeword& psi,
                      double kappa) {
  return std::norm(cascade_amplitude(h_tr, h_ri, psi.elements, kappa));
}

double achievable_rate(const Channel& h_tr, const Channel& h_ri, const Codeword& psi,
                       double kappa, double pt, double sigma_sq) {
  if (!(pt > 0.0)) throw std::invalid_argument("achievable_rate: pt must be positive");
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("achievable_rate: sigma_sq must be positive");
  return std::log2(1.0 + pt * effective_gain(h_tr, h_ri, psi, kappa) / sigma_sq);
}

int oracle_best_beam(const Channel& h_tr, const Channel& h_ri, const Codebook& codebook,
                     double kappa) {
  if (codebook.codewords.empty()) throw std::invalid_argument("oracle_best_beam: empty codebook");
  int best = 0;
  double best_gain = effective_gain(h_tr, h_ri, codebook.codewords[0], kappa);
  for (int i = 1; i < codebook.size(); ++i) {
    const double g = effective_gain(h_tr, h_ri, codebook.codewords[i], kappa);
    if (g > best_gain) {
      best_gain = g;
      best = i;
    }
  }
  return best;
}

std::vector<int> rank_beams(const Channel& h_tr, const Channel& h_ri, const Codebook& codebook,
                            double kappa) {
  if (codebook.codewords.empty()) throw std::invalid_argument("rank_beams: empty codebook");
  std::vector<double> gains(codebook.size());
  for (int i = 0; i < codebook.size(); ++i) {
    gains[i] = effective_gain(h_tr, h_ri, codebook.codewords[i], kappa);
  }
  std::vector<int> order(codebook.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&gains](int a, int b) { return gains[a] > gains[b]; });
  return order;
}

void write_codebook_csv(std::ostream& os, const Codebook& codebook) {
  codebook.validate();
  const Eigen::Index n = codebook.codewords.front().size();
  os << "index,angle_deg";
  for (Eigen::Index e = 0; e < n; ++e) os << ",e" << e;
  os << "\n";
  for (int i = 0; i < codebook.size(); ++i) {
    os << i << ',' << format_double(codebook.target_angles_deg[i]);
    for (Eigen::Index e = 0; e < n; ++e) {
      os << ',' << (codebook.codewords[i].elements[e] > 0 ? "1" : "-1");
    }
    os << "\n";
  }
}

}  // namespace rislink
