#pragma once

#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include "occusim/common.hpp"

namespace occusim::occupant {

enum class Activity { OutOfWorkingTime, Free, Busy, Lunch };

inline constexpr std::array<Activity, 4> kActivities = {Activity::OutOfWorkingTime, Activity::Free, Activity::Busy,
                                                        Activity::Lunch};

inline const char* to_label(Activity activity) {
  switch (activity) {
    case Activity::OutOfWorkingTime: return "out_of_working_time";
    case Activity::Free: return "free";
    case Activity::Busy: return "busy";
    case Activity::Lunch: return "lunch";
  }
  return "out_of_working_time";
}

// Case-insensitive; spaces and hyphens are treated as underscores so calendar
// files may use the human spellings ("Lunch", "Out of working time").
inline std::optional<Activity> activity_from_label(const std::string& raw) {
  std::string label;
  label.reserve(raw.size());
  for (char c : raw) {
    if (c == ' ' || c == '-') {
      label += '_';
    } else {
      label += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  for (Activity a : kActivities) {
    if (label == to_label(a)) return a;
  }
  return std::nullopt;
}

// Per-hour activity schedule for one day.
struct Calendar {
  std::string name;
  std::array<Activity, 24> entries;

  Activity at(int hour) const {
    if (hour < 0 || hour > 23) throw Error(ErrorCode::ConfigError, "hour must be in 0..23");
    return entries[static_cast<std::size_t>(hour)];
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

}  // namespace detail

// CSV with header "hour,activity" and one row per hour 0..23, any order.
inline Calendar parse_calendar(std::istream& in, const std::string& name = "calendar") {
  Calendar calendar;
  calendar.name = name;
  std::array<bool, 24> seen{};

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ConfigError, name + ": empty calendar file");
  {
    std::string header = detail::trim(line);
    for (auto& c : header) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (header != "hour,activity") {
      throw Error(ErrorCode::ConfigError, name + ": expected header 'hour,activity', got '" + line + "'");
    }
  }

  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const std::size_t comma = trimmed.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ConfigError, name + ": row " + std::to_string(row) + " is not 'hour,activity'");
    }
    const std::string hour_text = detail::trim(trimmed.substr(0, comma));
    const std::string label = detail::trim(trimmed.substr(comma + 1));

    int hour = -1;
    try {
      std::size_t used = 0;
      hour = std::stoi(hour_text, &used);
      if (used != hour_text.size()) hour = -1;
    } catch (const std::exception&) {
      hour = -1;
    }
    if (hour < 0 || hour > 23) {
      throw Error(ErrorCode::ConfigError,
                  name + ": row " + std::to_string(row) + " has invalid hour '" + hour_text + "'");
    }
    if (seen[static_cast<std::size_t>(hour)]) {
      throw Error(ErrorCode::DuplicateHour,
                  name + ": hour " + std::to_string(hour) + " appears twice (row " + std::to_string(row) + ")");
    }
    auto activity = activity_from_label(label);
    if (!activity) {
      throw Error(ErrorCode::UnknownActivityLabel,
                  name + ": row " + std::to_string(row) + " has unknown activity '" + label + "'");
    }
    seen[static_cast<std::size_t>(hour)] = true;
    calendar.entries[static_cast<std::size_t>(hour)] = *activity;
  }

  for (int hour = 0; hour < 24; ++hour) {
    if (!seen[static_cast<std::size_t>(hour)]) {
      throw Error(ErrorCode::MissingHour, name + ": hour " + std::to_string(hour) + " is missing");
    }
  }
  return calendar;
}

inline Calendar load_calendar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  return parse_calendar(in, path.filename().string());
}

inline std::string serialize_calendar(const Calendar& calendar) {
  std::ostringstream out;
  out << "hour,activity\n";
  for (int hour = 0; hour < 24; ++hour) {
    out << hour << ',' << to_label(calendar.entries[static_cast<std::size_t>(hour)]) << '\n';
  }
  return out.str();
}

}  // namespace occusim::occupant
