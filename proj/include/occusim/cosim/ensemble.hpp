#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "occusim/common.hpp"
#include "occusim/cosim/simulate.hpp"
#include "occusim/occupant/door.hpp"

namespace occusim::cosim {

// Per-clock-hour cross-run statistics: door-state frequencies (openness order:
// always_closed, mostly_closed, mostly_opened, always_opened) and nearest-rank
// CO2 quantiles.
struct HourSummary {
  int hour = 0;
  std::array<double, 4> door_state_frequency{};
  double co2_p5 = 0.0;
  double co2_p50 = 0.0;
  double co2_p95 = 0.0;
};

struct EnsembleSummary {
  std::size_t runs = 0;
  std::vector<HourSummary> hours;  // one entry per clock hour covered by the traces
};

// Nearest-rank quantile on a sorted ascending sample: the ceil(p*n)-th value.
inline double nearest_rank(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

inline int door_state_index(const std::string& label) {
  for (std::size_t i = 0; i < occupant::kDoorStates.size(); ++i) {
    if (label == occupant::to_label(occupant::kDoorStates[i])) return static_cast<int>(i);
  }
  throw Error(ErrorCode::UnknownLabel, "unknown door state '" + label + "' in trace");
}

// Aggregates traces of equal horizon into per-clock-hour statistics. Multi-day
// traces fold onto the 24-hour clock. Order of the traces does not matter.
inline EnsembleSummary summarize(const std::vector<Trace>& traces) {
  if (traces.empty()) throw Error(ErrorCode::ConfigError, "cannot summarize an empty ensemble");
  const std::size_t horizon = traces.front().size();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].size() != horizon) {
      throw Error(ErrorCode::RaggedTraces, "trace " + std::to_string(i) + " has " +
                                               std::to_string(traces[i].size()) + " steps, expected " +
                                               std::to_string(horizon));
    }
  }

  std::array<std::array<std::size_t, 4>, 24> counts{};
  std::array<std::vector<double>, 24> co2_samples;
  for (const auto& trace : traces) {
    for (const auto& record : trace) {
      const auto hour = static_cast<std::size_t>(record.clock_hour);
      counts[hour][static_cast<std::size_t>(door_state_index(record.door_state))] += 1;
      co2_samples[hour].push_back(record.co2_ppm);
    }
  }

  EnsembleSummary summary;
  summary.runs = traces.size();
  for (int hour = 0; hour < 24; ++hour) {
    auto& samples = co2_samples[static_cast<std::size_t>(hour)];
    if (samples.empty()) continue;  // clock hour not covered by the horizon
    std::sort(samples.begin(), samples.end());

    HourSummary hs;
    hs.hour = hour;
    std::size_t total = 0;
    for (std::size_t s : counts[static_cast<std::size_t>(hour)]) total += s;
    for (std::size_t i = 0; i < 4; ++i) {
      hs.door_state_frequency[i] =
          static_cast<double>(counts[static_cast<std::size_t>(hour)][i]) / static_cast<double>(total);
    }
    hs.co2_p5 = nearest_rank(samples, 0.05);
    hs.co2_p50 = nearest_rank(samples, 0.50);
    hs.co2_p95 = nearest_rank(samples, 0.95);
    summary.hours.push_back(hs);
  }
  return summary;
}

// Runs `runs` independent simulations with per-run seeds from the splitting
// rule. Workers pick runs round-robin and write into preallocated slots, so
// the result is identical for any worker count.
inline std::vector<Trace> run_ensemble(const ScenarioConfig& cfg, std::size_t runs, std::size_t workers = 1) {
  if (runs < 1) throw Error(ErrorCode::ConfigError, "runs must be >= 1");
  if (workers < 1) workers = 1;
  workers = std::min(workers, runs);

  std::vector<Trace> traces(runs);
  if (workers == 1) {
    for (std::size_t i = 0; i < runs; ++i) traces[i] = run_simulation(cfg, i);
    return traces;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= runs) break;
          traces[i] = run_simulation(cfg, i);
        }
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return traces;
}

inline EnsembleSummary run_monte_carlo(const ScenarioConfig& cfg, std::size_t runs, std::size_t workers = 1) {
  return summarize(run_ensemble(cfg, runs, workers));
}

}  // namespace occusim::cosim
