#pragma once

#include <string>
#include <vector>

#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::occupant {

// Physics feedback visible to the occupant each step.
struct PerceptionSet {
  double operative_temperature_c;
  double mean_humidity;  // fraction in [0, 1]
  double co2_ppm;
};

// Bin edges for mapping a continuous reading onto ordered labels. A value is
// assigned to the first bin whose upper edge it does not exceed (upper edges
// inclusive), and to the last label above the final edge.
struct Bins {
  std::vector<double> upper_edges;
  std::vector<std::string> labels;  // upper_edges.size() + 1 entries
};

inline Bins default_co2_bins() { return Bins{{800.0, 1200.0}, {"low", "medium", "high"}}; }

inline std::string discretize(double value, const Bins& bins) {
  if (bins.labels.size() != bins.upper_edges.size() + 1) {
    throw Error(ErrorCode::ConfigError, "bins need exactly one more label than edges");
  }
  for (std::size_t i = 1; i < bins.upper_edges.size(); ++i) {
    if (!(bins.upper_edges[i] > bins.upper_edges[i - 1])) {
      throw Error(ErrorCode::NonMonotonicThresholds, "bin edges must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < bins.upper_edges.size(); ++i) {
    if (value <= bins.upper_edges[i]) return bins.labels[i];
  }
  return bins.labels.back();
}

// Evidence labels for the discrete DBN nodes fed by continuous physics values.
inline bn::Evidence discretize_perceptions(const PerceptionSet& perceptions, const Bins& co2_bins) {
  bn::Evidence evidence;
  evidence["co2_level"] = discretize(perceptions.co2_ppm, co2_bins);
  return evidence;
}

}  // namespace occusim::occupant
