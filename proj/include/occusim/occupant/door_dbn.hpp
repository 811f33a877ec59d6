#pragma once

#include <array>
#include <string>
#include <vector>

#include "occusim/bn/dbn.hpp"
#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"
#include "occusim/occupant/activity.hpp"
#include "occusim/occupant/door.hpp"

namespace occusim::occupant {

inline constexpr const char* kVarActivity = "activity";
inline constexpr const char* kVarPresence = "occupant_present";
inline constexpr const char* kVarVisitor = "visitor_present";
inline constexpr const char* kVarPeriod = "period_of_day";
inline constexpr const char* kVarCo2 = "co2_level";
inline constexpr const char* kVarDoor = "door_state";

inline const std::vector<std::string>& period_labels() {
  static const std::vector<std::string> labels = {"night", "morning", "midday", "afternoon", "evening"};
  return labels;
}

inline std::string period_of_day(int hour) {
  if (hour < 0 || hour > 23) throw Error(ErrorCode::ConfigError, "hour must be in 0..23");
  if (hour <= 5 || hour >= 22) return "night";
  if (hour <= 11) return "morning";
  if (hour <= 13) return "midday";
  if (hour <= 17) return "afternoon";
  return "evening";
}

namespace detail {

// Expert-default door row for one parent combination. Weights encode the
// observed office habits: the door is used less when busy (privacy), least
// around lunch when the occupant tends to be out, visitors and stale air pull
// it open, and the state left at the previous step is sticky.
inline std::array<double, 4> door_row(Activity activity, bool present, bool visitor, const std::string& period,
                                      const std::string& co2, DoorState previous) {
  std::array<double, 4> w{};
  if (!present) {
    // Nobody inside to act on the door; it mostly stays as left, drifting
    // closed as people shut empty offices.
    w = {6.0, 0.4, 0.2, 0.1};
    w[static_cast<std::size_t>(previous)] += 4.0;
  } else {
    switch (activity) {
      case Activity::Free: w = {0.9, 1.1, 1.6, 1.4}; break;
      case Activity::Busy: w = {3.2, 1.6, 0.8, 0.4}; break;
      case Activity::Lunch: w = {2.5, 1.0, 0.5, 0.3}; break;
      case Activity::OutOfWorkingTime: w = {3.0, 1.0, 0.6, 0.4}; break;
    }
    if (visitor) {
      w[0] *= 0.6;
      w[2] *= 1.8;
      w[3] *= 1.6;
    }
    if (co2 == "medium") {
      w[2] *= 1.15;
      w[3] *= 1.15;
    } else if (co2 == "high") {
      w[0] *= 0.7;
      w[2] *= 1.5;
      w[3] *= 1.7;
    }
    if (period == "night") {
      w[0] *= 1.6;
    } else if (period == "evening") {
      w[0] *= 1.25;
    }
    w[static_cast<std::size_t>(previous)] *= 1.8;
  }
  double sum = w[0] + w[1] + w[2] + w[3];
  for (auto& v : w) v /= sum;
  return w;
}

inline std::vector<std::string> activity_domain() {
  std::vector<std::string> out;
  for (Activity a : kActivities) out.push_back(to_label(a));
  return out;
}

inline std::vector<std::string> door_domain() {
  std::vector<std::string> out;
  for (DoorState s : kDoorStates) out.push_back(to_label(s));
  return out;
}

}  // namespace detail

// Shipped two-slice door model. The door node has six parents — activity,
// occupant presence, visitor presence, period of day, CO2 level, and the
// previous door state — and the CPTs are illustrative expert defaults. The
// whole model can be replaced through a network spec file.
inline bn::TwoSliceSpec build_default_door_dbn() {
  bn::TwoSliceSpec spec;
  spec.variables = {
      {kVarActivity, detail::activity_domain()},
      {kVarPresence, {"absent", "present"}},
      {kVarVisitor, {"no", "yes"}},
      {kVarPeriod, period_labels()},
      {kVarCo2, {"low", "medium", "high"}},
      {kVarDoor, detail::door_domain()},
  };

  // Working-day share of each activity and the office context; these feed
  // pure-inference uses only, since the co-simulation clamps every parent as
  // evidence.
  bn::Cpt activity{kVarActivity, {}, {}};
  activity.rows[""] = {0.50, 0.20, 0.25, 0.05};

  bn::Cpt presence{kVarPresence, {kVarActivity}, {}};
  presence.rows["out_of_working_time"] = {0.98, 0.02};
  presence.rows["free"] = {0.05, 0.95};
  presence.rows["busy"] = {0.02, 0.98};
  presence.rows["lunch"] = {0.80, 0.20};

  bn::Cpt visitor{kVarVisitor, {kVarActivity}, {}};
  visitor.rows["out_of_working_time"] = {1.0, 0.0};
  visitor.rows["free"] = {0.80, 0.20};
  visitor.rows["busy"] = {0.90, 0.10};
  visitor.rows["lunch"] = {1.0, 0.0};

  bn::Cpt period{kVarPeriod, {}, {}};
  period.rows[""] = {8.0 / 24.0, 6.0 / 24.0, 2.0 / 24.0, 4.0 / 24.0, 4.0 / 24.0};

  bn::Cpt co2{kVarCo2, {}, {}};
  co2.rows[""] = {0.70, 0.25, 0.05};

  const std::vector<std::string> door_parents_prior = {kVarActivity, kVarPresence, kVarVisitor, kVarPeriod, kVarCo2};
  std::vector<std::string> door_parents_transition = door_parents_prior;
  door_parents_transition.push_back(std::string(bn::kPreviousPrefix) + kVarDoor);

  bn::Cpt door_prior{kVarDoor, door_parents_prior, {}};
  bn::Cpt door_transition{kVarDoor, door_parents_transition, {}};
  for (Activity a : kActivities) {
    for (int present = 0; present < 2; ++present) {
      for (int vis = 0; vis < 2; ++vis) {
        for (const auto& per : period_labels()) {
          for (const std::string& co2_level : {"low", "medium", "high"}) {
            const std::string base_key = std::string(to_label(a)) + "|" + (present ? "present" : "absent") + "|" +
                                         (vis ? "yes" : "no") + "|" + per + "|" + co2_level;
            // The day opens with the door as it was left overnight: closed.
            const auto prior_row =
                detail::door_row(a, present != 0, vis != 0, per, co2_level, DoorState::AlwaysClosed);
            door_prior.rows[base_key] = {prior_row.begin(), prior_row.end()};
            for (DoorState prev : kDoorStates) {
              const auto row = detail::door_row(a, present != 0, vis != 0, per, co2_level, prev);
              door_transition.rows[base_key + "|" + to_label(prev)] = {row.begin(), row.end()};
            }
          }
        }
      }
    }
  }

  spec.prior = {activity, presence, visitor, period, co2, door_prior};
  spec.transition = {activity, presence, visitor, period, co2, door_transition};
  return spec;
}

}  // namespace occusim::occupant
