#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "occusim/bn/dbn.hpp"
#include "occusim/bn/json_io.hpp"
#include "occusim/common.hpp"
#include "occusim/occupant/activity.hpp"
#include "occusim/occupant/model.hpp"
#include "occusim/physics/co2.hpp"
#include "occusim/physics/opening_flow.hpp"

namespace occusim::cosim {

// Piecewise-constant per-hour boundary value: either a single constant or one
// value per simulated hour.
struct BoundarySeries {
  std::vector<double> values;  // size 1 means constant

  double at_hour(std::size_t hour) const {
    if (values.size() == 1) return values.front();
    return values.at(hour);
  }

  bool covers(std::size_t hours) const { return values.size() == 1 || values.size() >= hours; }
};

struct PhysicsParams {
  double zone_volume_m3 = 36.0;
  double initial_co2_ppm = 400.0;
  physics::OpeningGeometry door;
  double crack_leakage_m3s = 0.0;
  double per_person_co2_m3s = physics::kDefaultPerPersonCo2M3s;
};

struct ScenarioConfig {
  std::string name = "scenario";
  bn::TwoSliceSpec dbn;
  occupant::Calendar calendar;
  PhysicsParams physics;
  BoundarySeries office_temperature_c;
  BoundarySeries corridor_temperature_c;
  BoundarySeries corridor_co2_ppm;
  double dt_s = 3600.0;
  std::size_t horizon_steps = 24;
  std::uint64_t seed = 0;
  occupant::BehaviourConfig behaviour;
  // Optional per-stream master seeds; default is the main seed.
  std::optional<std::uint64_t> door_seed;
  std::optional<std::uint64_t> visitor_seed;
  std::optional<std::uint64_t> presence_seed;

  std::size_t horizon_hours() const {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(horizon_steps) * dt_s / 3600.0));
  }
};

inline void validate_scenario(const ScenarioConfig& cfg) {
  if (!(cfg.dt_s > 0.0)) throw Error(ErrorCode::ConfigError, "dt_s must be > 0");
  if (cfg.horizon_steps < 1) throw Error(ErrorCode::ConfigError, "horizon_steps must be >= 1");
  if (!(cfg.physics.zone_volume_m3 > 0.0)) throw Error(ErrorCode::ConfigError, "zone volume must be > 0");
  if (cfg.physics.initial_co2_ppm < 0.0) throw Error(ErrorCode::ConfigError, "initial CO2 must be >= 0");
  if (cfg.physics.crack_leakage_m3s < 0.0) throw Error(ErrorCode::ConfigError, "crack leakage must be >= 0");
  if (cfg.physics.per_person_co2_m3s < 0.0) throw Error(ErrorCode::ConfigError, "per-person CO2 rate must be >= 0");
  physics::validate_geometry(cfg.physics.door);
  const std::size_t hours = cfg.horizon_hours();
  if (!cfg.office_temperature_c.covers(hours)) {
    throw Error(ErrorCode::ConfigError, "office temperature series does not cover the horizon");
  }
  if (!cfg.corridor_temperature_c.covers(hours)) {
    throw Error(ErrorCode::ConfigError, "corridor temperature series does not cover the horizon");
  }
  if (!cfg.corridor_co2_ppm.covers(hours)) {
    throw Error(ErrorCode::ConfigError, "corridor CO2 series does not cover the horizon");
  }
  auto issues = bn::validate_two_slice(cfg.dbn);
  if (!issues.empty()) throw Error(issues.front().code, join_issues(issues));
}

namespace detail {

inline BoundarySeries series_from_json(const nlohmann::json& value, const std::string& context) {
  BoundarySeries series;
  if (value.is_number()) {
    series.values.push_back(value.get<double>());
  } else if (value.is_array() && !value.empty()) {
    for (const auto& v : value) series.values.push_back(v.get<double>());
  } else {
    throw Error(ErrorCode::ConfigError, context + " must be a number or a non-empty array of per-hour numbers");
  }
  return series;
}

inline nlohmann::json series_to_json(const BoundarySeries& series) {
  if (series.values.size() == 1) return series.values.front();
  return series.values;
}

}  // namespace detail

// Parses the scenario document. Relative "dbn" and "calendar" references are
// resolved against base_dir. Unknown fields are rejected everywhere.
inline ScenarioConfig scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  bn::detail::check_fields(doc,
                           {"name", "dbn", "calendar", "physics", "boundary", "dt_s", "horizon_steps", "seed",
                            "behaviour", "door_seed", "visitor_seed", "presence_seed"},
                           "scenario");
  ScenarioConfig cfg;
  if (doc.contains("name")) cfg.name = doc.at("name").get<std::string>();

  bn::detail::require_field(doc, "dbn", "scenario");
  bn::detail::require_field(doc, "calendar", "scenario");
  {
    const auto dbn_path = base_dir / doc.at("dbn").get<std::string>();
    cfg.dbn = bn::load_two_slice(dbn_path);
    const auto calendar_path = base_dir / doc.at("calendar").get<std::string>();
    cfg.calendar = occupant::load_calendar(calendar_path);
  }

  if (doc.contains("physics")) {
    const auto& p = doc.at("physics");
    bn::detail::check_fields(
        p, {"zone_volume_m3", "initial_co2_ppm", "door", "crack_leakage_m3s", "per_person_co2_m3s"}, "physics");
    if (p.contains("zone_volume_m3")) cfg.physics.zone_volume_m3 = p.at("zone_volume_m3").get<double>();
    if (p.contains("initial_co2_ppm")) cfg.physics.initial_co2_ppm = p.at("initial_co2_ppm").get<double>();
    if (p.contains("crack_leakage_m3s")) cfg.physics.crack_leakage_m3s = p.at("crack_leakage_m3s").get<double>();
    if (p.contains("per_person_co2_m3s")) cfg.physics.per_person_co2_m3s = p.at("per_person_co2_m3s").get<double>();
    if (p.contains("door")) {
      const auto& d = p.at("door");
      bn::detail::check_fields(d, {"width_m", "height_m", "discharge_coefficient"}, "physics.door");
      if (d.contains("width_m")) cfg.physics.door.width_m = d.at("width_m").get<double>();
      if (d.contains("height_m")) cfg.physics.door.height_m = d.at("height_m").get<double>();
      if (d.contains("discharge_coefficient")) {
        cfg.physics.door.discharge_coefficient = d.at("discharge_coefficient").get<double>();
      }
    }
  }

  bn::detail::require_field(doc, "boundary", "scenario");
  {
    const auto& b = doc.at("boundary");
    bn::detail::check_fields(b, {"office_temperature_c", "corridor_temperature_c", "corridor_co2_ppm"}, "boundary");
    bn::detail::require_field(b, "office_temperature_c", "boundary");
    bn::detail::require_field(b, "corridor_temperature_c", "boundary");
    bn::detail::require_field(b, "corridor_co2_ppm", "boundary");
    cfg.office_temperature_c = detail::series_from_json(b.at("office_temperature_c"), "boundary.office_temperature_c");
    cfg.corridor_temperature_c =
        detail::series_from_json(b.at("corridor_temperature_c"), "boundary.corridor_temperature_c");
    cfg.corridor_co2_ppm = detail::series_from_json(b.at("corridor_co2_ppm"), "boundary.corridor_co2_ppm");
  }

  if (doc.contains("dt_s")) cfg.dt_s = doc.at("dt_s").get<double>();
  if (doc.contains("horizon_steps")) cfg.horizon_steps = doc.at("horizon_steps").get<std::size_t>();
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("door_seed")) cfg.door_seed = doc.at("door_seed").get<std::uint64_t>();
  if (doc.contains("visitor_seed")) cfg.visitor_seed = doc.at("visitor_seed").get<std::uint64_t>();
  if (doc.contains("presence_seed")) cfg.presence_seed = doc.at("presence_seed").get<std::uint64_t>();

  if (doc.contains("behaviour")) {
    const auto& b = doc.at("behaviour");
    bn::detail::check_fields(b,
                             {"lunch_out_probability", "visitor_probability_free", "visitor_probability_busy",
                              "metabolic_gain_w", "appliance_gain_w", "standby_gain_w", "metabolic_humidity_kgs",
                              "setpoint_c", "setback_c", "co2_thresholds", "door_variable"},
                             "behaviour");
    auto& cfg_b = cfg.behaviour;
    if (b.contains("lunch_out_probability")) cfg_b.lunch_out_probability = b.at("lunch_out_probability").get<double>();
    if (b.contains("visitor_probability_free")) {
      cfg_b.visitor_probability_free = b.at("visitor_probability_free").get<double>();
    }
    if (b.contains("visitor_probability_busy")) {
      cfg_b.visitor_probability_busy = b.at("visitor_probability_busy").get<double>();
    }
    if (b.contains("metabolic_gain_w")) cfg_b.metabolic_gain_w = b.at("metabolic_gain_w").get<double>();
    if (b.contains("appliance_gain_w")) cfg_b.appliance_gain_w = b.at("appliance_gain_w").get<double>();
    if (b.contains("standby_gain_w")) cfg_b.standby_gain_w = b.at("standby_gain_w").get<double>();
    if (b.contains("metabolic_humidity_kgs")) cfg_b.metabolic_humidity_kgs = b.at("metabolic_humidity_kgs").get<double>();
    if (b.contains("setpoint_c")) cfg_b.setpoint_c = b.at("setpoint_c").get<double>();
    if (b.contains("setback_c")) cfg_b.setback_c = b.at("setback_c").get<double>();
    if (b.contains("door_variable")) cfg_b.door_variable = b.at("door_variable").get<std::string>();
    if (b.contains("co2_thresholds")) {
      cfg_b.co2_bins.upper_edges.clear();
      for (const auto& edge : b.at("co2_thresholds")) cfg_b.co2_bins.upper_edges.push_back(edge.get<double>());
      if (cfg_b.co2_bins.upper_edges.size() + 1 != cfg_b.co2_bins.labels.size()) {
        throw Error(ErrorCode::ConfigError, "behaviour.co2_thresholds must keep three bins (two edges)");
      }
    }
  }

  validate_scenario(cfg);
  return cfg;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  const auto doc = bn::load_json_file(path);
  return scenario_from_json(doc, path.parent_path());
}

}  // namespace occusim::cosim
