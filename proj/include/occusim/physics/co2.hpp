#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "occusim/common.hpp"
#include "occusim/physics/opening_flow.hpp"

namespace occusim::physics {

// Sedentary adult CO2 exhalation rate, m^3/s of pure CO2 per person.
// Engineering default; configurable through the scenario.
inline constexpr double kDefaultPerPersonCo2M3s = 5.2e-6;

struct ZoneState {
  double concentration_ppm;
  double volume_m3;
  double initial_ppm;
};

struct Co2Source {
  double generation_m3s;  // pure CO2, = occupant_count * per_person_rate
  int occupant_count;
  double per_person_rate_m3s;
};

inline double co2_generation(int occupants, double per_person_rate_m3s = kDefaultPerPersonCo2M3s) {
  if (occupants < 0) throw Error(ErrorCode::ConfigError, "occupant count must be >= 0");
  if (per_person_rate_m3s < 0.0) throw Error(ErrorCode::ConfigError, "per-person CO2 rate must be >= 0");
  return static_cast<double>(occupants) * per_person_rate_m3s;
}

inline Co2Source co2_source(int occupants, double per_person_rate_m3s = kDefaultPerPersonCo2M3s) {
  return Co2Source{co2_generation(occupants, per_person_rate_m3s), occupants, per_person_rate_m3s};
}

// Advances the well-mixed zone balance V dC/dt = 1e6 S + Q_in C_adj - Q_out C
// over one step with coefficients frozen, using the exact exponential solution
//   C(t+dt) = C_ss + (C(t) - C_ss) exp(-(Q_out/V) dt),
//   C_ss    = (1e6 S + Q_in C_adj) / Q_out.
// With no outflow the balance degenerates to pure accumulation
// C(t+dt) = C(t) + (1e6 S / V) dt. Concentrations are in ppm, the source in
// m^3/s of pure CO2; the 1e6 factor converts volume fraction to ppm.
inline double co2_step(const ZoneState& zone, const FlowPair& flows, const Co2Source& source,
                       double adjacent_co2_ppm, double dt_s) {
  if (!(dt_s > 0.0)) throw Error(ErrorCode::NonPositiveTimestep, "dt must be > 0, got " + std::to_string(dt_s));
  if (!(zone.volume_m3 > 0.0)) throw Error(ErrorCode::ConfigError, "zone volume must be > 0");

  const double q_in = std::max(flows.q_in_m3s, 0.0);
  const double q_out = std::max(flows.q_out_m3s, 0.0);
  const double generation_ppm_m3s = 1e6 * source.generation_m3s;

  double next;
  if (q_out == 0.0) {
    next = zone.concentration_ppm + generation_ppm_m3s / zone.volume_m3 * dt_s;
  } else {
    const double steady = (generation_ppm_m3s + q_in * adjacent_co2_ppm) / q_out;
    next = steady + (zone.concentration_ppm - steady) * std::exp(-(q_out / zone.volume_m3) * dt_s);
  }
  return std::max(next, 0.0);
}

}  // namespace occusim::physics
