#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "occusim/bn/json_io.hpp"
#include "occusim/common.hpp"
#include "occusim/cosim/ensemble.hpp"
#include "occusim/occupant/door.hpp"

namespace occusim::io {

inline nlohmann::json summary_to_json(const cosim::EnsembleSummary& summary) {
  nlohmann::json hours = nlohmann::json::array();
  for (const auto& h : summary.hours) {
    nlohmann::json freq = nlohmann::json::object();
    for (std::size_t i = 0; i < occupant::kDoorStates.size(); ++i) {
      freq[occupant::to_label(occupant::kDoorStates[i])] = h.door_state_frequency[i];
    }
    hours.push_back({{"hour", h.hour},
                     {"door_state_frequency", freq},
                     {"co2_ppm_quantiles", {{"p5", h.co2_p5}, {"p50", h.co2_p50}, {"p95", h.co2_p95}}}});
  }
  return {{"runs", summary.runs}, {"hours", hours}};
}

inline cosim::EnsembleSummary summary_from_json(const nlohmann::json& doc) {
  bn::detail::check_fields(doc, {"runs", "hours"}, "summary");
  bn::detail::require_field(doc, "runs", "summary");
  bn::detail::require_field(doc, "hours", "summary");
  cosim::EnsembleSummary summary;
  summary.runs = doc.at("runs").get<std::size_t>();
  for (const auto& item : doc.at("hours")) {
    bn::detail::check_fields(item, {"hour", "door_state_frequency", "co2_ppm_quantiles"}, "summary hour");
    cosim::HourSummary h;
    h.hour = item.at("hour").get<int>();
    const auto& freq = item.at("door_state_frequency");
    for (std::size_t i = 0; i < occupant::kDoorStates.size(); ++i) {
      h.door_state_frequency[i] = freq.at(occupant::to_label(occupant::kDoorStates[i])).get<double>();
    }
    const auto& q = item.at("co2_ppm_quantiles");
    h.co2_p5 = q.at("p5").get<double>();
    h.co2_p50 = q.at("p50").get<double>();
    h.co2_p95 = q.at("p95").get<double>();
    summary.hours.push_back(h);
  }
  return summary;
}

inline void write_summary(const std::filesystem::path& path, const cosim::EnsembleSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << summary_to_json(summary).dump(2) << '\n';
}

inline cosim::EnsembleSummary read_summary(const std::filesystem::path& path) {
  return summary_from_json(bn::load_json_file(path));
}

}  // namespace occusim::io
