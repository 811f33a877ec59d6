#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "occusim/common.hpp"
#include "occusim/cosim/simulate.hpp"

namespace occusim::io {

// Fixed 6-significant-digit float formatting with '.' decimal separator, so
// trace files are byte-stable golden artifacts.
inline std::string format_g6(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

inline constexpr const char* kTraceHeader =
    "step,hour,activity,door_state,door_open_ratio,occupied,visitor,q_in_m3s,q_out_m3s,co2_ppm";

inline std::string trace_to_csv(const cosim::Trace& trace) {
  std::ostringstream out;
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.step << ',' << r.clock_hour << ',' << r.activity << ',' << r.door_state << ','
        << format_g6(r.door_open_ratio) << ',' << (r.occupied ? 1 : 0) << ',' << (r.visitor_present ? 1 : 0) << ','
        << format_g6(r.q_in_m3s) << ',' << format_g6(r.q_out_m3s) << ',' << format_g6(r.co2_ppm) << '\n';
  }
  return out.str();
}

inline void write_trace(const std::filesystem::path& path, const cosim::Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << trace_to_csv(trace);
}

inline cosim::Trace trace_from_csv(std::istream& in, const std::string& name = "trace") {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(ErrorCode::ConfigError, name + ": missing or unexpected trace header");
  }
  cosim::Trace trace;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 10) {
      throw Error(ErrorCode::ConfigError, name + ": row " + std::to_string(row) + " has " +
                                              std::to_string(fields.size()) + " fields, expected 10");
    }
    try {
      cosim::StepRecord r;
      r.step = static_cast<std::size_t>(std::stoull(fields[0]));
      r.clock_hour = std::stoi(fields[1]);
      r.activity = fields[2];
      r.door_state = fields[3];
      r.door_open_ratio = std::stod(fields[4]);
      r.occupied = fields[5] == "1";
      r.visitor_present = fields[6] == "1";
      r.q_in_m3s = std::stod(fields[7]);
      r.q_out_m3s = std::stod(fields[8]);
      r.co2_ppm = std::stod(fields[9]);
      trace.push_back(std::move(r));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, name + ": row " + std::to_string(row) + " is malformed");
    }
  }
  return trace;
}

inline cosim::Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  return trace_from_csv(in, path.filename().string());
}

}  // namespace occusim::io
