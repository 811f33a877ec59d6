#pragma once

#include <string>

#include "occusim/common.hpp"

namespace occusim::physics {

inline constexpr double kStandardPressurePa = 101325.0;
inline constexpr double kAirGasConstantJkgK = 287.055;
inline constexpr double kGravityMs2 = 9.81;

// Temperature dead band below which buoyancy is treated as absent.
inline constexpr double kBuoyancyDeadBandK = 0.01;

inline double celsius_to_kelvin(double t_c) { return t_c + 273.15; }
inline double kelvin_to_celsius(double t_k) { return t_k - 273.15; }

// Dry-air density from the ideal gas law at standard pressure.
inline double air_density(double temperature_k) {
  if (!(temperature_k > 0.0)) {
    throw Error(ErrorCode::NonPhysicalTemperature,
                "temperature must be > 0 K, got " + std::to_string(temperature_k));
  }
  return kStandardPressurePa / (kAirGasConstantJkgK * temperature_k);
}

}  // namespace occusim::physics
