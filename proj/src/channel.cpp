// SPDX-License-Identifier: Apache-2.0
#include "rislink/channel.hpp"

#include <cmath>
#include <numbers>

namespace rislink {

void Geometry::validate() const {
  if (n_elements < 1) throw std::invalid_argument("Geometry: n_elements must be >= 1");
  if (!(spacing_wavelengths > 0.0)) {
    throw std::invalid_argument("Geometry: spacing_wavelengths must be positive");
  }
  auto check_az = [](double az, const char* name) {
    if (!(az >= 0.0 && az < 360.0)) {
      throw std::invalid_argument(std::string("Geometry: ") + name + " must be in [0, 360)");
    }
  };
  check_az(incident_azimuth_deg, "incident_azimuth_deg");
  check_az(receiver_azimuth_deg, "receiver_azimuth_deg");
}

ComplexVector array_response(const Geometry& geometry, double azimuth_deg) {
  geometry.validate();
  const double az_rad = azimuth_deg * std::numbers::pi / 180.0;
  const double phase_step = 2.0 * std::numbers::pi * geometry.spacing_wavelengths * std::cos(az_rad);
  ComplexVector a(geometry.n_elements);
  for (int n = 0; n < geometry.n_elements; ++n) {
    a[n] = std::polar(1.0, phase_step * n);
  }
  return a;
}

Channel make_channel(const Geometry& geometry, double azimuth_deg, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("make_channel: gain must be positive");
  return Channel{gain, array_response(geometry, azimuth_deg)};
}

ComplexVector add_awgn(const ComplexVector& y, double sigma_sq, RngStream& rng) {
  if (sigma_sq < 0.0) throw std::invalid_argument("add_awgn: negative variance");
  return y + sample_complex_gaussian(rng, y.size(), sigma_sq);
}

}  // namespace rislink
