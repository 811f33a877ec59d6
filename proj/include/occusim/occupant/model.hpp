#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "occusim/bn/dbn.hpp"
#include "occusim/bn/factor.hpp"
#include "occusim/common.hpp"
#include "occusim/occupant/activity.hpp"
#include "occusim/occupant/door.hpp"
#include "occusim/occupant/door_dbn.hpp"
#include "occusim/occupant/perception.hpp"

namespace occusim::occupant {

// Everything the physics side needs from the occupant each step. Every field
// is populated every step.
struct ActionSet {
  bool occupied = false;
  double metabolic_gain_w = 0.0;
  double appliance_gain_w = 0.0;
  double metabolic_humidity_kgs = 0.0;
  double setpoint_temperature_c = 0.0;
  bool heating_cooling_active = false;
  double window_open_ratio = 0.0;
  double door_open_ratio = 0.0;
};

struct BehaviourConfig {
  double lunch_out_probability = 0.8;      // chance the occupant eats outside
  double visitor_probability_free = 0.2;   // hourly visitor arrival chances
  double visitor_probability_busy = 0.1;
  double metabolic_gain_w = 100.0;         // per person, sedentary
  double appliance_gain_w = 120.0;
  double standby_gain_w = 10.0;
  double metabolic_humidity_kgs = 4.0e-5;  // per person
  double setpoint_c = 21.0;
  double setback_c = 16.0;
  Bins co2_bins = default_co2_bins();
  std::string door_variable = kVarDoor;
};

// Validated behavioural model: the two-slice door DBN, the activity calendar
// and the behaviour constants.
class OccupantModel {
 public:
  OccupantModel(const bn::TwoSliceSpec& dbn, Calendar calendar, BehaviourConfig behaviour = {})
      : dbn_(bn::TwoSlice::compile(dbn)), calendar_(std::move(calendar)), behaviour_(std::move(behaviour)) {
    const auto& interface = dbn_.interface_names();
    if (std::find(interface.begin(), interface.end(), behaviour_.door_variable) == interface.end()) {
      throw Error(ErrorCode::ConfigError,
                  "door variable '" + behaviour_.door_variable + "' must be an inter-slice variable of the DBN");
    }
    const auto& variables = dbn_.spec().variables;
    auto it = std::find_if(variables.begin(), variables.end(),
                           [&](const bn::VariableSpec& v) { return v.name == behaviour_.door_variable; });
    std::set<std::string> domain(it->domain.begin(), it->domain.end());
    std::set<std::string> expected;
    for (DoorState s : kDoorStates) expected.insert(to_label(s));
    if (domain != expected) {
      throw Error(ErrorCode::ConfigError,
                  "door variable '" + behaviour_.door_variable + "' must use the four averaged door-state labels");
    }
  }

  const bn::TwoSlice& dbn() const { return dbn_; }
  const Calendar& calendar() const { return calendar_; }
  const BehaviourConfig& behaviour() const { return behaviour_; }

 private:
  bn::TwoSlice dbn_;
  Calendar calendar_;
  BehaviourConfig behaviour_;
};

// Independent random streams so door decisions, visitor arrivals and lunch
// absences can be reseeded separately without disturbing each other.
struct OccupantRngs {
  Rng door;
  Rng visitor;
  Rng presence;
};

// Mutable per-run state: the filtered belief over the DBN interface. Empty
// before the first step; the first step runs on the prior slice.
struct OccupantState {
  std::optional<bn::Distribution> belief;
};

struct OccupantStepResult {
  ActionSet actions;
  DoorState door_state = DoorState::AlwaysClosed;
  bool visitor_present = false;
};

// One question/response exchange: clamp the hour's context as evidence,
// advance the DBN one slice, sample the realized door state, and answer with
// the full action record. The belief collapses onto the sampled state, since
// that is the door position the physics actually sees.
inline OccupantStepResult occupant_step(const OccupantModel& model, OccupantState& state, int hour,
                                        const PerceptionSet& perceptions, OccupantRngs& rngs) {
  const BehaviourConfig& behaviour = model.behaviour();
  const Activity activity = model.calendar().at(hour);

  bool present = false;
  switch (activity) {
    case Activity::OutOfWorkingTime: present = false; break;
    case Activity::Lunch: present = uniform01(rngs.presence) >= behaviour.lunch_out_probability; break;
    case Activity::Free:
    case Activity::Busy: present = true; break;
  }

  double visitor_probability = 0.0;
  if (activity == Activity::Free) visitor_probability = behaviour.visitor_probability_free;
  if (activity == Activity::Busy) visitor_probability = behaviour.visitor_probability_busy;
  const bool visitor = uniform01(rngs.visitor) < visitor_probability;

  // Evidence restricted to nodes the supplied DBN actually declares, so a
  // replacement model with fewer context nodes keeps working.
  bn::Evidence evidence;
  const auto declare = [&](const std::string& name, const std::string& label) {
    for (const auto& var : model.dbn().spec().variables) {
      if (var.name == name) {
        evidence[name] = label;
        return;
      }
    }
  };
  declare(kVarActivity, to_label(activity));
  declare(kVarPresence, present ? "present" : "absent");
  declare(kVarVisitor, visitor ? "yes" : "no");
  declare(kVarPeriod, period_of_day(hour));
  declare(kVarCo2, discretize(perceptions.co2_ppm, behaviour.co2_bins));

  const bn::Distribution posterior =
      state.belief ? model.dbn().filter(*state.belief, evidence) : model.dbn().initial_belief(evidence);
  const bn::Assignment sampled = bn::sample_from(posterior, rngs.door);
  state.belief = bn::point_mass(posterior, sampled);

  const DoorState door = door_state_from_label(sampled.at(behaviour.door_variable));
  const int persons = (present ? 1 : 0) + (visitor ? 1 : 0);

  OccupantStepResult result;
  result.door_state = door;
  result.visitor_present = visitor;
  result.actions.occupied = present;
  result.actions.metabolic_gain_w = behaviour.metabolic_gain_w * persons;
  result.actions.appliance_gain_w = present ? behaviour.appliance_gain_w : behaviour.standby_gain_w;
  result.actions.metabolic_humidity_kgs = behaviour.metabolic_humidity_kgs * persons;
  result.actions.setpoint_temperature_c = present ? behaviour.setpoint_c : behaviour.setback_c;
  result.actions.heating_cooling_active = present;
  result.actions.window_open_ratio = 0.0;  // window behaviour is not modelled
  result.actions.door_open_ratio = door_ratio(door);
  return result;
}

}  // namespace occusim::occupant
