#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "occusim/common.hpp"
#include "occusim/cosim/ensemble.hpp"
#include "occusim/cosim/simulate.hpp"
#include "occusim/io/trace_csv.hpp"

namespace occusim::io {

// Gnuplot-ready columns for an ensemble summary: one row per covered clock
// hour with the four door-state frequencies (openness order) and the CO2
// quantile band.
inline std::string summary_plotdata(const cosim::EnsembleSummary& summary) {
  std::ostringstream out;
  out << "# hour freq_always_closed freq_mostly_closed freq_mostly_opened freq_always_opened"
         " co2_p5 co2_p50 co2_p95\n";
  for (const auto& h : summary.hours) {
    out << h.hour;
    for (double f : h.door_state_frequency) out << ' ' << format_g6(f);
    out << ' ' << format_g6(h.co2_p5) << ' ' << format_g6(h.co2_p50) << ' ' << format_g6(h.co2_p95) << '\n';
  }
  return out.str();
}

// Step-level long format for a single-run trace.
inline std::string trace_plotdata(const cosim::Trace& trace) {
  std::ostringstream out;
  out << "# step hour co2_ppm door_open_ratio occupied visitor\n";
  for (const auto& r : trace) {
    out << r.step << ' ' << r.clock_hour << ' ' << format_g6(r.co2_ppm) << ' ' << format_g6(r.door_open_ratio) << ' '
        << (r.occupied ? 1 : 0) << ' ' << (r.visitor_present ? 1 : 0) << '\n';
  }
  return out.str();
}

inline void write_plotdata(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace occusim::io
