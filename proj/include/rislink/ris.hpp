// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "rislink/channel.hpp"

namespace rislink {

/// 1-bit RIS reflection vector: every element is exactly +1 (0 deg shift)
/// or -1 (180 deg shift).
struct Codeword {
  Eigen::VectorXd elements;

  Eigen::Index size() const { return elements.size(); }
  void validate() const;
};

/// Finite set of codewords, each labeled by the reflection angle it was
/// designed for.
struct Codebook {
  std::vector<Codeword> codewords;
  std::vector<double> target_angles_deg;
  double incident_angle_deg = 0.0;

  int size() const { return static_cast<int>(codewords.size()); }
  void validate() const;
};

/// Wrap an angle in degrees into (-180, 180].
double wrap_phase_deg(double phase_deg);

/// 1-bit phase quantizer: wrapped |phase| <= 90 -> 0, else 180.
/// The tie at exactly +/-90 goes to 0.
double quantize_phase_1bit(double phase_deg);

/// Per-element ULA phase profile in degrees (unwrapped):
/// 360 * spacing * n * cos(azimuth).
Eigen::VectorXd element_phases_deg(const Geometry& geometry, double azimuth_deg);

/// Continuous per-element phase incident - desired, quantized to 1 bit and
/// mapped 0 -> +1, 180 -> -1.
Codeword design_codeword(const Geometry& geometry, double incident_deg, double desired_deg);

/// `size` codewords at uniformly spaced design angles over [min, max],
/// endpoints inclusive.
Codebook build_codebook(const Geometry& geometry, double incident_deg, double min_deg,
                        double max_deg, int size);

/// Passive reflection: y[n] = psi[n] * kappa * x[n]. No noise is added.
ComplexVector apply_ris(const ComplexVector& x_ris, const Codeword& psi, double kappa);

/// kappa * (h_tr .* h_ri)^T psi, the complex amplitude the cascade applies
/// to a transmitted symbol. psi may be a soft (convex-combined) reflection
/// vector during training, hence the plain VectorXd argument.
Complex cascade_amplitude(const Channel& h_tr, const Channel& h_ri, const Eigen::VectorXd& psi,
                          double kappa);

/// kappa^2 * gain_tr^2 * gain_ri^2 * |sum_n a_tr[n] a_ri[n] psi[n]|^2.
double effective_gain(const Channel& h_tr, const Channel& h_ri, const Codeword& psi,
                      double kappa);

/// log2(1 + pt * effective_gain / sigma_sq).
double achievable_rate(const Channel& h_tr, const Channel& h_ri, const Codeword& psi,
                       double kappa, double pt, double sigma_sq);

/// Index of the gain-maximizing codeword; ties break to the lowest index.
int oracle_best_beam(const Channel& h_tr, const Channel& h_ri, const Codebook& codebook,
                     double kappa);

/// All codeword indices in descending effective-gain order, stable on ties.
/// Gain order equals SER order for a fixed channel, so this ranking is also
/// the top-K benchmark ranking.
std::vector<int> rank_beams(const Channel& h_tr, const Channel& h_ri, const Codebook& codebook,
                            double kappa);

/// CSV export: header `index,angle_deg,e0,..,e{N-1}`, elements as 1/-1.
void write_codebook_csv(std::ostream& os, const Codebook& codebook);

}  // namespace rislink
