#pragma once

#include <cmath>
#include <string>

#include "occusim/common.hpp"
#include "occusim/physics/air.hpp"

namespace occusim::physics {

struct OpeningGeometry {
  double width_m = 0.9;
  double height_m = 2.0;
  double discharge_coefficient = 0.6;  // in (0, 1]
  double opening_ratio = 1.0;          // averaged open fraction of the time step, [0, 1]
};

inline void validate_geometry(const OpeningGeometry& geom) {
  if (!(geom.width_m > 0.0) || !(geom.height_m > 0.0)) {
    throw Error(ErrorCode::ConfigError, "opening dimensions must be positive");
  }
  if (!(geom.discharge_coefficient > 0.0 && geom.discharge_coefficient <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "discharge coefficient must be in (0, 1]");
  }
  if (!(geom.opening_ratio >= 0.0 && geom.opening_ratio <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "opening ratio must be in [0, 1]");
  }
}

struct AirSides {
  double zone_temperature_k;
  double adjacent_temperature_k;
  double zone_density_kgm3;
  double adjacent_density_kgm3;

  static AirSides from_temperatures(double zone_k, double adjacent_k) {
    return AirSides{zone_k, adjacent_k, air_density(zone_k), air_density(adjacent_k)};
  }
};

struct FlowPair {
  double q_in_m3s = 0.0;
  double q_out_m3s = 0.0;
  double neutral_height_m = 0.0;
};

// Buoyancy flow through the opening segment [z1, z2] for a given neutral-plane
// height. Orientation epsilon = sign(T_zone - T_adjacent); the density in the
// prefactor is the mean of the two sides. Evaluated bottom-up (z1 < z2) a
// positive value is flow into the zone; the segment must not straddle the
// neutral plane. Returns 0 inside the temperature dead band.
inline double segment_flow(const OpeningGeometry& geom, const AirSides& sides, double z1, double z2,
                           double neutral_height_m) {
  validate_geometry(geom);
  const double h = geom.height_m;
  if (z1 < 0.0 || z1 > h || z2 < 0.0 || z2 > h) {
    throw Error(ErrorCode::OutOfOpening,
                "segment [" + std::to_string(z1) + ", " + std::to_string(z2) + "] exceeds opening height " +
                    std::to_string(h));
  }
  if ((z1 - neutral_height_m) * (z2 - neutral_height_m) < 0.0) {
    throw Error(ErrorCode::SegmentStraddlesNeutralPlane,
                "segment [" + std::to_string(z1) + ", " + std::to_string(z2) + "] straddles the neutral plane at " +
                    std::to_string(neutral_height_m));
  }

  const double delta_t = sides.zone_temperature_k - sides.adjacent_temperature_k;
  if (std::fabs(delta_t) < kBuoyancyDeadBandK) return 0.0;
  const double epsilon = (delta_t > 0.0) ? 1.0 : -1.0;

  const double rho_zone = sides.zone_density_kgm3;
  const double rho_adjacent = sides.adjacent_density_kgm3;
  const double delta_rho = rho_adjacent - rho_zone;
  const double rho = 0.5 * (rho_zone + rho_adjacent);

  const double prefactor = (2.0 / (3.0 * rho)) * epsilon * geom.discharge_coefficient * geom.width_m *
                           std::sqrt(2.0 * rho * std::fabs(delta_rho) * kGravityMs2);
  const double profile = std::pow(std::fabs(neutral_height_m - z1), 1.5) -
                         std::pow(std::fabs(neutral_height_m - z2), 1.5);
  return prefactor * profile;
}

// Height at which the hydrostatic pressure difference between the two sides
// vanishes, found as the root of the mass-balance residual
// m_dot_in(HN) - m_dot_out(HN) by bisection (1e-6 m tolerance). In the
// Boussinesq limit this tends to H/2.
inline double neutral_plane(const OpeningGeometry& geom, const AirSides& sides) {
  validate_geometry(geom);
  const double delta_t = sides.zone_temperature_k - sides.adjacent_temperature_k;
  if (std::fabs(delta_t) < kBuoyancyDeadBandK) {
    throw Error(ErrorCode::NoBuoyancy, "temperature difference below " + std::to_string(kBuoyancyDeadBandK) +
                                           " K; the neutral plane is undefined");
  }
  const bool zone_warmer = delta_t > 0.0;
  // Warm side loses air through the top segment; the lower segment carries the
  // replacement flow from the other side.
  const double rho_lower = zone_warmer ? sides.adjacent_density_kgm3 : sides.zone_density_kgm3;
  const double rho_upper = zone_warmer ? sides.zone_density_kgm3 : sides.adjacent_density_kgm3;

  const double h = geom.height_m;
  const auto residual = [&](double hn) {
    const double lower = std::fabs(segment_flow(geom, sides, 0.0, hn, hn));
    const double upper = std::fabs(segment_flow(geom, sides, hn, h, hn));
    return rho_lower * lower - rho_upper * upper;
  };

  double lo = 0.0;
  double hi = h;
  // residual(0) < 0 < residual(h): the root is bracketed by construction.
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Bidirectional door flows. Both volumetric flows scale linearly with the
// opening ratio; a fully closed door passes only the crack leakage constant.
// Without buoyancy both flows are zero and the neutral height is reported at
// H/2 by convention.
inline FlowPair door_flows(const OpeningGeometry& geom, const AirSides& sides, double crack_leakage_m3s = 0.0) {
  validate_geometry(geom);
  if (crack_leakage_m3s < 0.0) throw Error(ErrorCode::ConfigError, "crack leakage must be >= 0");

  const double half = 0.5 * geom.height_m;
  if (geom.opening_ratio == 0.0) {
    return FlowPair{crack_leakage_m3s, crack_leakage_m3s, half};
  }

  const double delta_t = sides.zone_temperature_k - sides.adjacent_temperature_k;
  if (std::fabs(delta_t) < kBuoyancyDeadBandK) {
    return FlowPair{0.0, 0.0, half};
  }

  const double hn = neutral_plane(geom, sides);
  const double lower = std::fabs(segment_flow(geom, sides, 0.0, hn, hn));
  const double upper = std::fabs(segment_flow(geom, sides, hn, geom.height_m, hn));

  FlowPair flows;
  flows.neutral_height_m = hn;
  if (delta_t > 0.0) {
    // Warm zone: cooler corridor air enters below the neutral plane, zone air
    // leaves above it.
    flows.q_in_m3s = geom.opening_ratio * lower;
    flows.q_out_m3s = geom.opening_ratio * upper;
  } else {
    flows.q_in_m3s = geom.opening_ratio * upper;
    flows.q_out_m3s = geom.opening_ratio * lower;
  }
  return flows;
}

}  // namespace occusim::physics
