#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "occusim/common.hpp"
#include "occusim/cosim/scenario.hpp"
#include "occusim/occupant/model.hpp"
#include "occusim/physics/co2.hpp"
#include "occusim/physics/opening_flow.hpp"

namespace occusim::cosim {

struct StepRecord {
  std::size_t step = 0;
  int clock_hour = 0;
  std::string activity;
  std::string door_state;
  double door_open_ratio = 0.0;
  bool occupied = false;
  bool visitor_present = false;
  double q_in_m3s = 0.0;
  double q_out_m3s = 0.0;
  double co2_ppm = 0.0;  // zone concentration at the end of the step
};

using Trace = std::vector<StepRecord>;

// Seed-splitting rule, applied bit-exactly so parallel and serial ensembles
// agree: run_seed = mix64(master ^ run_index), and each behavioural stream is
// seeded with mix64(run_seed ^ tag), tags "door" / "visi" / "pres" read as
// big-endian ASCII (0x646F6F72, 0x76697369, 0x70726573).
inline constexpr std::uint64_t kDoorStreamTag = 0x646F6F72ULL;
inline constexpr std::uint64_t kVisitorStreamTag = 0x76697369ULL;
inline constexpr std::uint64_t kPresenceStreamTag = 0x70726573ULL;

inline occupant::OccupantRngs make_run_rngs(const ScenarioConfig& cfg, std::size_t run_index) {
  const auto stream_seed = [&](std::uint64_t master, std::uint64_t tag) {
    return mix64(mix64(master ^ static_cast<std::uint64_t>(run_index)) ^ tag);
  };
  occupant::OccupantRngs rngs;
  rngs.door = Rng(stream_seed(cfg.door_seed.value_or(cfg.seed), kDoorStreamTag));
  rngs.visitor = Rng(stream_seed(cfg.visitor_seed.value_or(cfg.seed), kVisitorStreamTag));
  rngs.presence = Rng(stream_seed(cfg.presence_seed.value_or(cfg.seed), kPresenceStreamTag));
  return rngs;
}

// One co-simulation run. Each step the physics side publishes its perceptions,
// the occupant answers with an action record, and the zone is advanced with
// the averaged door ratio: perceive, decide, act, integrate. Deterministic for
// a fixed (config, run_index).
inline Trace run_simulation(const ScenarioConfig& cfg, std::size_t run_index = 0) {
  validate_scenario(cfg);
  occupant::OccupantModel model(cfg.dbn, cfg.calendar, cfg.behaviour);
  occupant::OccupantRngs rngs = make_run_rngs(cfg, run_index);
  occupant::OccupantState state;

  physics::ZoneState zone{cfg.physics.initial_co2_ppm, cfg.physics.zone_volume_m3, cfg.physics.initial_co2_ppm};

  Trace trace;
  trace.reserve(cfg.horizon_steps);
  for (std::size_t step = 0; step < cfg.horizon_steps; ++step) {
    const std::size_t hour_index = static_cast<std::size_t>(static_cast<double>(step) * cfg.dt_s / 3600.0);
    const int clock_hour = static_cast<int>(hour_index % 24);

    const double office_c = cfg.office_temperature_c.at_hour(hour_index);
    const double corridor_c = cfg.corridor_temperature_c.at_hour(hour_index);
    const double corridor_co2 = cfg.corridor_co2_ppm.at_hour(hour_index);

    // (1) physics publishes start-of-step perceptions
    const occupant::PerceptionSet perceptions{office_c, 0.5, zone.concentration_ppm};

    // (2) occupant answers
    occupant::OccupantStepResult answer;
    try {
      answer = occupant_step(model, state, clock_hour, perceptions, rngs);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(step) + ": " + e.what());
    }

    // (3) door flows, then the CO2 balance
    physics::OpeningGeometry door = cfg.physics.door;
    door.opening_ratio = answer.actions.door_open_ratio;
    const auto sides =
        physics::AirSides::from_temperatures(physics::celsius_to_kelvin(office_c), physics::celsius_to_kelvin(corridor_c));
    physics::FlowPair flows;
    try {
      flows = physics::door_flows(door, sides, cfg.physics.crack_leakage_m3s);
      const int persons = (answer.actions.occupied ? 1 : 0) + (answer.visitor_present ? 1 : 0);
      const auto source = physics::co2_source(persons, cfg.physics.per_person_co2_m3s);
      zone.concentration_ppm = physics::co2_step(zone, flows, source, corridor_co2, cfg.dt_s);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(step) + ": " + e.what());
    }

    // (4) record
    StepRecord record;
    record.step = step;
    record.clock_hour = clock_hour;
    record.activity = occupant::to_label(model.calendar().at(clock_hour));
    record.door_state = occupant::to_label(answer.door_state);
    record.door_open_ratio = answer.actions.door_open_ratio;
    record.occupied = answer.actions.occupied;
    record.visitor_present = answer.visitor_present;
    record.q_in_m3s = flows.q_in_m3s;
    record.q_out_m3s = flows.q_out_m3s;
    record.co2_ppm = zone.concentration_ppm;
    trace.push_back(std::move(record));
  }
  return trace;
}

}  // namespace occusim::cosim
