#pragma once

#include <array>
#include <string>

#include "occusim/common.hpp"

namespace occusim::occupant {

// Time-averaged door states for one step, ordered by openness.
enum class DoorState { AlwaysClosed, MostlyClosed, MostlyOpened, AlwaysOpened };

inline constexpr std::array<DoorState, 4> kDoorStates = {DoorState::AlwaysClosed, DoorState::MostlyClosed,
                                                         DoorState::MostlyOpened, DoorState::AlwaysOpened};

inline const char* to_label(DoorState state) {
  switch (state) {
    case DoorState::AlwaysClosed: return "always_closed";
    case DoorState::MostlyClosed: return "mostly_closed";
    case DoorState::MostlyOpened: return "mostly_opened";
    case DoorState::AlwaysOpened: return "always_opened";
  }
  return "always_closed";
}

inline DoorState door_state_from_label(const std::string& label) {
  for (DoorState s : kDoorStates) {
    if (label == to_label(s)) return s;
  }
  throw Error(ErrorCode::UnknownLabel, "unknown door state '" + label + "'");
}

// Open fraction of the time step for each averaged state. The middle states
// follow the 30%/70% split of a door that is closed for roughly a third of
// the step.
inline double door_ratio(DoorState state) {
  switch (state) {
    case DoorState::AlwaysClosed: return 0.0;
    case DoorState::MostlyClosed: return 0.3;
    case DoorState::MostlyOpened: return 0.7;
    case DoorState::AlwaysOpened: return 1.0;
  }
  return 0.0;
}

}  // namespace occusim::occupant
