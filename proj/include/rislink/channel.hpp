// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rislink/numerics.hpp"

namespace rislink {

/// Uniform-linear-array geometry in the azimuth plane. Elevation is kept
/// as a field for completeness but the array model is azimuth-only
/// (elevation pinned at broadside).
struct Geometry {
  int n_elements = 32;
  double spacing_wavelengths = 0.5;
  double incident_azimuth_deg = 90.0;
  double receiver_azimuth_deg = 110.0;
  double elevation_deg = 90.0;

  void validate() const;
};

/// Single-path geometric channel: h = gain * response, with |response[n]| = 1.
struct Channel {
  double gain = 1.0;
  ComplexVector response;

  /// gain-scaled response vector (the h actually entering the chain).
  ComplexVector effective() const { return gain * response; }
};

/// ULA response at the given azimuth: [a]_n = exp(j*2*pi*spacing*n*cos(az)),
/// n = 0..N-1.
ComplexVector array_response(const Geometry& geometry, double azimuth_deg);

Channel make_channel(const Geometry& geometry, double azimuth_deg, double gain = 1.0);

/// y + n with n complex Gaussian of per-sample variance sigma_sq.
ComplexVector add_awgn(const ComplexVector& y, double sigma_sq, RngStream& rng);

}  // namespace rislink
