#pragma once

// Umbrella header for the occusim co-simulation library.

#include "occusim/common.hpp"

#include "occusim/bn/network.hpp"
#include "occusim/bn/factor.hpp"
#include "occusim/bn/inference.hpp"
#include "occusim/bn/sampling.hpp"
#include "occusim/bn/dbn.hpp"
#include "occusim/bn/learning.hpp"
#include "occusim/bn/json_io.hpp"

#include "occusim/physics/air.hpp"
#include "occusim/physics/opening_flow.hpp"
#include "occusim/physics/co2.hpp"

#include "occusim/occupant/activity.hpp"
#include "occusim/occupant/door.hpp"
#include "occusim/occupant/perception.hpp"
#include "occusim/occupant/door_dbn.hpp"
#include "occusim/occupant/model.hpp"

#include "occusim/cosim/scenario.hpp"
#include "occusim/cosim/simulate.hpp"
#include "occusim/cosim/ensemble.hpp"

#include "occusim/io/trace_csv.hpp"
#include "occusim/io/summary_json.hpp"
#include "occusim/io/manifest.hpp"
#include "occusim/io/plotdata.hpp"
