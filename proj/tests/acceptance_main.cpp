// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "occusim/occusim.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace occusim;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kDataDir = OCCUSIM_DATA_DIR;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Variable-elimination posteriors match full-joint enumeration on 100
//    random networks (<= 8 variables, <= 4 labels), L_inf <= 1e-9, < 10 s.
void criterion_inference_oracle() {
  const auto start = Clock::now();
  Rng rng(2025);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int vars = 2 + static_cast<int>(uniform01(rng) * 7.0);      // 2..8
    const int labels = 2 + static_cast<int>(uniform01(rng) * 3.0);    // 2..4
    const auto spec = oracles::random_network(rng, vars, labels, 3);
    const auto net = bn::compile_network(spec);

    bn::Evidence evidence;
    std::vector<std::string> query;
    for (const auto& var : spec.variables) {
      const double u = uniform01(rng);
      if (u < 0.25) {
        evidence[var.name] = var.domain[static_cast<std::size_t>(uniform01(rng) * var.domain.size())];
      } else if (u < 0.6) {
        query.push_back(var.name);
      }
    }
    if (query.empty()) query.push_back(spec.variables.front().name);
    for (const auto& q : query) evidence.erase(q);

    std::map<std::vector<std::string>, double> oracle;
    try {
      oracle = oracles::enumeration_posterior(spec, evidence, query);
    } catch (const std::exception&) {
      continue;  // evidence of probability zero; nothing to compare
    }
    const auto posterior = bn::infer_posterior(net, evidence, query);
    double linf = 0.0;
    for (const auto& [labels_key, p] : oracle) {
      bn::Assignment assignment;
      for (std::size_t i = 0; i < query.size(); ++i) assignment[query[i]] = labels_key[i];
      linf = std::max(linf, std::fabs(posterior.probability_of(assignment) - p));
    }
    require(linf <= 1e-9, "L_inf " + std::to_string(linf) + " above 1e-9 on trial " + std::to_string(trial));
    ++compared;
  }
  require(compared >= 90, "too many degenerate draws: only " + std::to_string(compared) + " comparisons");
  const double elapsed = seconds_since(start);
  require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s exceeds 10 s");
}

// 2. T-1 filter steps equal inference on the unrolled shipped door model for
//    T in {2, 3, 5}, L_inf <= 1e-9.
void criterion_dbn_consistency() {
  const auto spec = occupant::build_default_door_dbn();
  const auto model = bn::TwoSlice::compile(spec);

  const std::vector<std::string> activities = {"free", "busy", "lunch", "busy", "free"};
  const std::vector<std::string> presence = {"present", "present", "absent", "present", "present"};
  const std::vector<std::string> visitors = {"no", "yes", "no", "no", "yes"};
  const std::vector<std::string> periods = {"morning", "morning", "midday", "afternoon", "afternoon"};
  const std::vector<std::string> co2 = {"low", "medium", "medium", "high", "medium"};

  for (std::size_t horizon : {2u, 3u, 5u}) {
    bn::Evidence unrolled_evidence;
    std::vector<bn::Evidence> per_step(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
      per_step[t] = {{occupant::kVarActivity, activities[t]},
                     {occupant::kVarPresence, presence[t]},
                     {occupant::kVarVisitor, visitors[t]},
                     {occupant::kVarPeriod, periods[t]},
                     {occupant::kVarCo2, co2[t]}};
      for (const auto& [name, label] : per_step[t]) {
        unrolled_evidence[name + "@" + std::to_string(t)] = label;
      }
    }

    auto belief = model.initial_belief(per_step[0]);
    for (std::size_t t = 1; t < horizon; ++t) belief = model.filter(belief, per_step[t]);

    const auto unrolled = bn::compile_network(bn::unroll_dbn(spec, horizon));
    const auto query = std::string(occupant::kVarDoor) + "@" + std::to_string(horizon - 1);
    const auto expected = bn::infer_posterior(unrolled, unrolled_evidence, {query});

    double linf = 0.0;
    for (occupant::DoorState s : occupant::kDoorStates) {
      const std::string label = occupant::to_label(s);
      linf = std::max(linf, std::fabs(belief.probability_of({{occupant::kVarDoor, label}}) -
                                      expected.probability_of({{query, label}})));
    }
    require(linf <= 1e-9, "T=" + std::to_string(horizon) + ": L_inf " + std::to_string(linf) + " above 1e-9");
  }
}

// 3. CPTs learned from 1e4 sampled records (prior 1) are within L1 0.05 of the
//    generating 4-variable network, row by row.
void criterion_learning_recovery() {
  Rng rng(3);
  const auto truth_spec = oracles::random_network(rng, 4, 3, 1, 0.8);
  const auto truth = bn::compile_network(truth_spec);

  std::vector<bn::Assignment> observations;
  Rng sampler(17);
  observations.reserve(10000);
  for (int i = 0; i < 10000; ++i) observations.push_back(bn::sample_assignment(truth, {}, sampler));

  auto structure = truth_spec;
  for (auto& cpt : structure.cpts) cpt.rows.clear();
  const auto learned = bn::learn_cpts(structure, observations, 1.0);

  for (std::size_t c = 0; c < truth_spec.cpts.size(); ++c) {
    for (const auto& [key, truth_row] : truth_spec.cpts[c].rows) {
      const auto& learned_row = learned.cpts[c].rows.at(key);
      double l1 = 0.0;
      for (std::size_t k = 0; k < truth_row.size(); ++k) l1 += std::fabs(truth_row[k] - learned_row[k]);
      require(l1 <= 0.05, "cpt '" + truth_spec.cpts[c].child + "' row '" + key + "' off by L1 " + std::to_string(l1));
    }
  }
}

// 4. co2_step matches the closed-form decay at every hourly point over 6 h
//    within 0.5 ppm, and an RK4 dt=1 s reference within 1 ppm over a 24 h
//    variable-coefficient day.
void criterion_physics_vs_analytic() {
  const double v = 36.0;
  const double q = v / 3600.0;  // tau = 1 h
  double c = 1200.0;
  for (int hour = 1; hour <= 6; ++hour) {
    c = physics::co2_step({c, v, 1200.0}, {q, q, 1.0}, physics::co2_source(0), 400.0, 3600.0);
    const double analytic = 400.0 + 800.0 * std::exp(-static_cast<double>(hour));
    require(std::fabs(c - analytic) <= 0.5,
            "decay hour " + std::to_string(hour) + ": |" + std::to_string(c - analytic) + "| > 0.5 ppm");
  }

  const int persons[24] = {0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 1, 1, 0, 1, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  double c_exp = 450.0;
  double c_rk4 = 450.0;
  for (int hour = 0; hour < 24; ++hour) {
    const double q_h = 0.003 + 0.002 * (hour % 5);
    const double c_adj = 400.0 + 20.0 * (hour % 3);
    const auto source = physics::co2_source(persons[hour]);
    c_exp = physics::co2_step({c_exp, v, 450.0}, {q_h, q_h, 1.0}, source, c_adj, 3600.0);
    c_rk4 = oracles::rk4_co2(c_rk4, v, q_h, q_h, source.generation_m3s, c_adj, 3600.0, 1.0);
    require(std::fabs(c_exp - c_rk4) <= 1.0,
            "hour " + std::to_string(hour) + ": |" + std::to_string(c_exp - c_rk4) + "| > 1 ppm vs RK4");
  }
}

// 5. segment_flow reproduces an independently recomputed Eq.-style value for
//    the door fixture within 1e-6 relative; zero cases are exact.
void criterion_flow_oracle() {
  const physics::OpeningGeometry door{0.9, 2.0, 0.6, 1.0};
  const auto sides = physics::AirSides::from_temperatures(303.15, 293.15);

  // Independent recomputation, spelled out from scratch.
  const double rho_zone = 101325.0 / (287.055 * 303.15);
  const double rho_adjacent = 101325.0 / (287.055 * 293.15);
  const double rho = 0.5 * (rho_zone + rho_adjacent);
  const double reference = (2.0 / (3.0 * rho)) * 1.0 * 0.6 * 0.9 *
                           std::sqrt(2.0 * rho * std::fabs(rho_adjacent - rho_zone) * 9.81) *
                           (std::pow(1.0, 1.5) - std::pow(0.0, 1.5));

  const double flow = physics::segment_flow(door, sides, 0.0, 1.0, 1.0);
  require(std::fabs(flow - reference) / std::fabs(reference) <= 1e-6,
          "fixture flow " + std::to_string(flow) + " vs reference " + std::to_string(reference));

  require(physics::segment_flow(door, sides, 0.4, 0.4, 1.0) == 0.0, "z1 == z2 must give exactly zero");
  const auto balanced = physics::AirSides::from_temperatures(296.15, 296.15);
  require(physics::segment_flow(door, balanced, 0.0, 1.0, 1.0) == 0.0, "dT == 0 must give exactly zero");
}

// 6. 100-run Monte Carlo on the day-1 calendar orders mean hourly door use
//    lunch < busy < free, by sampling and by exact posterior. < 30 s.
void criterion_qualitative_day1() {
  const auto start = Clock::now();
  const auto cfg = cosim::load_scenario(kDataDir / "scenario_day1.json");
  const auto traces = cosim::run_ensemble(cfg, 100);

  std::map<std::string, double> use_sum;
  std::map<std::string, int> use_hours;
  for (int hour = 0; hour < 24; ++hour) {
    const auto activity = cfg.calendar.at(hour);
    if (activity == occupant::Activity::OutOfWorkingTime) continue;
    int used = 0;
    for (const auto& trace : traces) {
      if (trace[static_cast<std::size_t>(hour)].door_state != "always_closed") ++used;
    }
    const std::string label = occupant::to_label(activity);
    use_sum[label] += static_cast<double>(used) / static_cast<double>(traces.size());
    use_hours[label] += 1;
  }
  const double lunch = use_sum.at("lunch") / use_hours.at("lunch");
  const double busy = use_sum.at("busy") / use_hours.at("busy");
  const double free_use = use_sum.at("free") / use_hours.at("free");
  require(lunch < busy && busy < free_use,
          "sampled door-use ordering violated: lunch=" + std::to_string(lunch) + " busy=" + std::to_string(busy) +
              " free=" + std::to_string(free_use));

  // Exact-posterior route on the shipped model.
  const auto model = bn::TwoSlice::compile(cfg.dbn);
  const auto exact_use = [&](const std::string& activity) {
    const auto posterior = bn::infer_posterior(model.prior(), {{occupant::kVarActivity, activity}},
                                               {occupant::kVarDoor});
    return 1.0 - posterior.probability_of({{occupant::kVarDoor, "always_closed"}});
  };
  const double exact_lunch = exact_use("lunch");
  const double exact_busy = exact_use("busy");
  const double exact_free = exact_use("free");
  require(exact_lunch < exact_busy && exact_busy < exact_free,
          "exact door-use ordering violated: lunch=" + std::to_string(exact_lunch) + " busy=" +
              std::to_string(exact_busy) + " free=" + std::to_string(exact_free));

  const double elapsed = seconds_since(start);
  require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s exceeds 30 s");
}

// 7. (config, seed) gives byte-identical traces and summaries across repeated
//    runs and across worker counts 1 and 8.
void criterion_determinism() {
  const auto cfg = cosim::load_scenario(kDataDir / "scenario_day1.json");

  const auto trace_a = io::trace_to_csv(cosim::run_simulation(cfg));
  const auto trace_b = io::trace_to_csv(cosim::run_simulation(cfg));
  require(trace_a == trace_b, "repeated runs produced different traces");

  const auto ensemble_1 = cosim::run_ensemble(cfg, 100, 1);
  const auto ensemble_8 = cosim::run_ensemble(cfg, 100, 8);
  require(io::trace_to_csv(ensemble_1[0]) == trace_a, "ensemble run 0 differs from the single run");
  require(io::summary_to_json(cosim::summarize(ensemble_1)).dump() ==
              io::summary_to_json(cosim::summarize(ensemble_8)).dump(),
          "summaries differ between 1 and 8 workers");
  for (std::size_t i = 0; i < ensemble_1.size(); ++i) {
    require(io::trace_to_csv(ensemble_1[i]) == io::trace_to_csv(ensemble_8[i]),
            "trace " + std::to_string(i) + " differs between worker counts");
  }
}

// 8. 1e4 randomized scenarios emit no negative concentration, no
//    non-normalized frequency row, and no record violating a type invariant.
void criterion_invariant_fuzz() {
  const auto dbn = occupant::build_default_door_dbn();
  Rng rng(4242);
  const occupant::Activity activities[] = {occupant::Activity::OutOfWorkingTime, occupant::Activity::Free,
                                           occupant::Activity::Busy, occupant::Activity::Lunch};

  std::vector<cosim::Trace> batch;
  for (int scenario = 0; scenario < 10000; ++scenario) {
    cosim::ScenarioConfig cfg;
    cfg.dbn = dbn;
    cfg.calendar.name = "fuzz";
    for (auto& slot : cfg.calendar.entries) slot = activities[static_cast<int>(uniform01(rng) * 4.0)];
    cfg.physics.zone_volume_m3 = 12.0 + 90.0 * uniform01(rng);
    cfg.physics.initial_co2_ppm = 2600.0 * uniform01(rng);
    cfg.physics.crack_leakage_m3s = 0.003 * uniform01(rng);
    cfg.physics.door.width_m = 0.6 + 0.6 * uniform01(rng);
    cfg.physics.door.height_m = 1.8 + 0.5 * uniform01(rng);
    cfg.office_temperature_c.values = {14.0 + 16.0 * uniform01(rng)};
    cfg.corridor_temperature_c.values = {14.0 + 16.0 * uniform01(rng)};
    cfg.corridor_co2_ppm.values = {300.0 + 1000.0 * uniform01(rng)};
    cfg.dt_s = 3600.0;
    cfg.horizon_steps = 6;
    cfg.seed = rng();

    const auto trace = cosim::run_simulation(cfg);
    require(trace.size() == 6, "wrong trace length");
    for (const auto& r : trace) {
      require(r.co2_ppm >= 0.0, "negative concentration in scenario " + std::to_string(scenario));
      require(r.door_open_ratio >= 0.0 && r.door_open_ratio <= 1.0, "door ratio out of range");
      require(r.q_in_m3s >= 0.0 && r.q_out_m3s >= 0.0, "negative flow");
      require(r.clock_hour >= 0 && r.clock_hour <= 23, "clock hour out of range");
      require(!r.activity.empty() && !r.door_state.empty(), "unpopulated record field");
    }

    batch.push_back(trace);
    if (batch.size() == 10) {
      const auto summary = cosim::summarize(batch);
      for (const auto& h : summary.hours) {
        double total = 0.0;
        for (double f : h.door_state_frequency) {
          require(f >= 0.0 && f <= 1.0, "frequency out of range");
          total += f;
        }
        require(std::fabs(total - 1.0) <= 1e-9, "frequency row not normalized");
        require(h.co2_p5 <= h.co2_p50 && h.co2_p50 <= h.co2_p95, "quantiles out of order");
      }
      batch.clear();
    }
  }
}

struct Criterion {
  const char* name;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 inference oracle equivalence (100 random networks, L_inf <= 1e-9, < 10 s)", criterion_inference_oracle},
      {"2 DBN filter/unroll consistency on the shipped door model (T in {2,3,5})", criterion_dbn_consistency},
      {"3 learning recovery (1e4 records, prior 1, every row L1 <= 0.05)", criterion_learning_recovery},
      {"4 co2_step vs closed form (<= 0.5 ppm) and RK4 reference (<= 1 ppm)", criterion_physics_vs_analytic},
      {"5 opening-flow fixture vs independent recomputation (1e-6 relative)", criterion_flow_oracle},
      {"6 qualitative day-1 reproduction: door use lunch < busy < free (< 30 s)", criterion_qualitative_day1},
      {"7 determinism of traces and summaries across runs and workers {1,8}", criterion_determinism},
      {"8 invariant fuzzing over 1e4 randomized scenarios", criterion_invariant_fuzz},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    try {
      criterion.run();
      std::printf("[PASS] criterion %s\n", criterion.name);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion %s\n       %s\n", criterion.name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
  }
  return failures;
}
