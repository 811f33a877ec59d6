#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "occusim/bn/inference.hpp"
#include "occusim/occupant/activity.hpp"
#include "occusim/occupant/door.hpp"
#include "occusim/occupant/door_dbn.hpp"
#include "occusim/occupant/model.hpp"
#include "occusim/occupant/perception.hpp"

using namespace occusim;
using namespace occusim::occupant;

namespace {

std::string uniform_calendar_csv(const std::string& label) {
  std::ostringstream out;
  out << "hour,activity\n";
  for (int h = 0; h < 24; ++h) out << h << ',' << label << '\n';
  return out.str();
}

Calendar uniform_calendar(Activity activity) {
  Calendar c;
  c.name = "uniform";
  c.entries.fill(activity);
  return c;
}

// P(door != always_closed | activity) on the prior slice of the shipped
// model, everything else marginalized.
double door_use_given_activity(const bn::Network& prior, const std::string& activity) {
  const auto posterior = bn::infer_posterior(prior, {{kVarActivity, activity}}, {kVarDoor});
  return 1.0 - posterior.probability_of({{kVarDoor, "always_closed"}});
}

}  // namespace

TEST_CASE("a uniform calendar file parses") {
  std::istringstream in(uniform_calendar_csv("busy"));
  const auto calendar = parse_calendar(in);
  for (int h = 0; h < 24; ++h) CHECK(calendar.at(h) == Activity::Busy);
}

TEST_CASE("calendar labels match case-insensitively with human spellings") {
  std::ostringstream out;
  out << "hour,activity\n";
  for (int h = 0; h < 24; ++h) {
    if (h < 7) {
      out << h << ",Out of working time\n";
    } else if (h == 12) {
      out << h << ",Lunch\n";
    } else {
      out << h << ",FREE\n";
    }
  }
  std::istringstream in(out.str());
  const auto calendar = parse_calendar(in);
  CHECK(calendar.at(3) == Activity::OutOfWorkingTime);
  CHECK(calendar.at(12) == Activity::Lunch);
  CHECK(calendar.at(15) == Activity::Free);
}

TEST_CASE("a missing hour is reported by number") {
  std::ostringstream out;
  out << "hour,activity\n";
  for (int h = 0; h < 23; ++h) out << h << ",busy\n";
  std::istringstream in(out.str());
  try {
    parse_calendar(in);
    FAIL("expected MissingHour");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingHour);
    CHECK(std::string(e.what()).find("23") != std::string::npos);
  }
}

TEST_CASE("duplicate hours and unknown labels are rejected with row numbers") {
  std::istringstream dup("hour,activity\n0,busy\n0,free\n");
  try {
    parse_calendar(dup);
    FAIL("expected DuplicateHour");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateHour);
  }

  std::istringstream unknown("hour,activity\n0,naptime\n");
  try {
    parse_calendar(unknown);
    FAIL("expected UnknownActivityLabel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownActivityLabel);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("calendar parse-serialize-parse is the identity") {
  std::istringstream in(uniform_calendar_csv("Lunch"));
  const auto calendar = parse_calendar(in);
  const auto text = serialize_calendar(calendar);
  std::istringstream again(text);
  const auto reparsed = parse_calendar(again);
  CHECK(serialize_calendar(reparsed) == text);
  for (int h = 0; h < 24; ++h) CHECK(reparsed.at(h) == calendar.at(h));
}

TEST_CASE("door ratios are a monotone bijection over the four states") {
  CHECK(door_ratio(DoorState::AlwaysClosed) == 0.0);
  CHECK(door_ratio(DoorState::MostlyClosed) == 0.3);
  CHECK(door_ratio(DoorState::MostlyOpened) == 0.7);
  CHECK(door_ratio(DoorState::AlwaysOpened) == 1.0);

  double previous = -1.0;
  for (DoorState s : kDoorStates) {
    CHECK(door_ratio(s) > previous);
    previous = door_ratio(s);
    CHECK(door_state_from_label(to_label(s)) == s);
  }
  CHECK_THROWS_AS(door_state_from_label("ajar"), Error);
}

TEST_CASE("co2 discretization uses left-inclusive upper edges") {
  const auto bins = default_co2_bins();
  CHECK(discretize(400.0, bins) == "low");
  CHECK(discretize(800.0, bins) == "low");
  CHECK(discretize(1200.0, bins) == "medium");
  CHECK(discretize(2000.0, bins) == "high");

  Bins bad{{1200.0, 800.0}, {"low", "medium", "high"}};
  try {
    discretize(500.0, bad);
    FAIL("expected NonMonotonicThresholds");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotonicThresholds);
  }

  const auto evidence = discretize_perceptions({21.0, 0.5, 1500.0}, bins);
  CHECK(evidence.at("co2_level") == "high");
}

TEST_CASE("the shipped door model validates and has the six-parent door node") {
  const auto spec = build_default_door_dbn();
  CHECK(bn::validate_two_slice(spec).empty());

  const bn::Cpt* door_transition = nullptr;
  for (const auto& cpt : spec.transition) {
    if (cpt.child == kVarDoor) door_transition = &cpt;
  }
  REQUIRE(door_transition != nullptr);
  CHECK(door_transition->parents.size() == 6);

  bool has_previous_door = false;
  for (const auto& parent : door_transition->parents) {
    if (parent == std::string(bn::kPreviousPrefix) + kVarDoor) has_previous_door = true;
  }
  CHECK(has_previous_door);
  CHECK(bn::interface_variables(spec) == std::vector<std::string>{kVarDoor});
}

TEST_CASE("shipped CPTs bias door use free > busy > lunch by exact inference") {
  const auto model = bn::TwoSlice::compile(build_default_door_dbn());
  const double use_free = door_use_given_activity(model.prior(), "free");
  const double use_busy = door_use_given_activity(model.prior(), "busy");
  const double use_lunch = door_use_given_activity(model.prior(), "lunch");

  CHECK(use_busy < use_free);
  CHECK(use_lunch < use_busy);
}

TEST_CASE("out-of-working-time steps report an absent, low-gain occupant") {
  OccupantModel model(build_default_door_dbn(), uniform_calendar(Activity::OutOfWorkingTime));
  OccupantState state;
  OccupantRngs rngs{Rng(1), Rng(2), Rng(3)};

  int closed = 0;
  const int steps = 500;
  for (int i = 0; i < steps; ++i) {
    const auto result = occupant_step(model, state, 2, {20.0, 0.5, 420.0}, rngs);
    CHECK_FALSE(result.actions.occupied);
    CHECK(result.actions.metabolic_gain_w == 0.0);
    CHECK(result.actions.appliance_gain_w == 10.0);
    CHECK(result.actions.window_open_ratio == 0.0);
    CHECK_FALSE(result.visitor_present);
    if (result.door_state == DoorState::AlwaysClosed) ++closed;
  }
  CHECK(static_cast<double>(closed) / steps > 0.8);
}

TEST_CASE("occupied steps populate every action field") {
  OccupantModel model(build_default_door_dbn(), uniform_calendar(Activity::Busy));
  OccupantState state;
  OccupantRngs rngs{Rng(7), Rng(8), Rng(9)};
  const auto result = occupant_step(model, state, 10, {21.5, 0.5, 650.0}, rngs);
  CHECK(result.actions.occupied);
  CHECK(result.actions.metabolic_gain_w >= 100.0);
  CHECK(result.actions.appliance_gain_w == 120.0);
  CHECK(result.actions.metabolic_humidity_kgs > 0.0);
  CHECK(result.actions.setpoint_temperature_c == 21.0);
  CHECK(result.actions.heating_cooling_active);
  CHECK(result.actions.door_open_ratio == door_ratio(result.door_state));
}

TEST_CASE("occupant steps are deterministic for fixed seeds") {
  const auto dbn = build_default_door_dbn();
  for (int trial = 0; trial < 3; ++trial) {
    OccupantModel model(dbn, uniform_calendar(Activity::Free));
    OccupantState state_a, state_b;
    OccupantRngs rngs_a{Rng(100), Rng(200), Rng(300)};
    OccupantRngs rngs_b{Rng(100), Rng(200), Rng(300)};
    for (int i = 0; i < 24; ++i) {
      const auto a = occupant_step(model, state_a, i, {21.0, 0.5, 500.0}, rngs_a);
      const auto b = occupant_step(model, state_b, i, {21.0, 0.5, 500.0}, rngs_b);
      CHECK(a.door_state == b.door_state);
      CHECK(a.visitor_present == b.visitor_present);
      CHECK(a.actions.occupied == b.actions.occupied);
      CHECK(a.actions.door_open_ratio == b.actions.door_open_ratio);
    }
  }
}

TEST_CASE("sampled door use during busy hours is below free hours") {
  const auto dbn = build_default_door_dbn();
  const auto mean_ratio = [&](Activity activity, std::uint64_t seed) {
    OccupantModel model(dbn, uniform_calendar(activity));
    OccupantState state;
    OccupantRngs rngs{Rng(seed), Rng(seed + 1), Rng(seed + 2)};
    double total = 0.0;
    const int steps = 10000;
    for (int i = 0; i < steps; ++i) {
      total += occupant_step(model, state, 10, {21.0, 0.5, 500.0}, rngs).actions.door_open_ratio;
    }
    return total / steps;
  };

  const double busy_mean = mean_ratio(Activity::Busy, 41);
  const double free_mean = mean_ratio(Activity::Free, 42);
  CHECK(busy_mean < free_mean);

  // Exact-inference oracle for the same ordering on the shipped network.
  const auto model = bn::TwoSlice::compile(dbn);
  CHECK(door_use_given_activity(model.prior(), "busy") < door_use_given_activity(model.prior(), "free"));
}

TEST_CASE("a minimal replacement DBN with only the door node works") {
  bn::TwoSliceSpec spec;
  spec.variables = {{kVarDoor, {"always_closed", "mostly_closed", "mostly_opened", "always_opened"}}};
  bn::Cpt prior{kVarDoor, {}, {}};
  prior.rows[""] = {0.7, 0.1, 0.1, 0.1};
  bn::Cpt transition{kVarDoor, {std::string(bn::kPreviousPrefix) + kVarDoor}, {}};
  transition.rows["always_closed"] = {0.8, 0.1, 0.05, 0.05};
  transition.rows["mostly_closed"] = {0.3, 0.4, 0.2, 0.1};
  transition.rows["mostly_opened"] = {0.2, 0.2, 0.4, 0.2};
  transition.rows["always_opened"] = {0.1, 0.1, 0.2, 0.6};
  spec.prior = {prior};
  spec.transition = {transition};

  OccupantModel model(spec, uniform_calendar(Activity::Busy));
  OccupantState state;
  OccupantRngs rngs{Rng(5), Rng(6), Rng(7)};
  const auto result = occupant_step(model, state, 9, {21.0, 0.5, 900.0}, rngs);
  CHECK(result.actions.door_open_ratio == door_ratio(result.door_state));
}

TEST_CASE("models whose door variable is missing or mislabeled are rejected") {
  bn::TwoSliceSpec spec;
  spec.variables = {{"door", {"closed", "open"}}};
  bn::Cpt prior{"door", {}, {}};
  prior.rows[""] = {0.5, 0.5};
  bn::Cpt transition{"door", {"previous:door"}, {}};
  transition.rows["closed"] = {0.5, 0.5};
  transition.rows["open"] = {0.5, 0.5};
  spec.prior = {prior};
  spec.transition = {transition};

  try {
    OccupantModel model(spec, uniform_calendar(Activity::Busy));
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("period_of_day buckets the clock") {
  CHECK(period_of_day(0) == "night");
  CHECK(period_of_day(23) == "night");
  CHECK(period_of_day(8) == "morning");
  CHECK(period_of_day(12) == "midday");
  CHECK(period_of_day(15) == "afternoon");
  CHECK(period_of_day(19) == "evening");
  CHECK_THROWS_AS(period_of_day(24), Error);
}
