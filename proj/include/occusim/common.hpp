#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace occusim {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ErrorCode {
  InvalidSpec,
  CycleDetected,
  IncompleteCpt,
  RowNotNormalized,
  UnknownVariable,
  UnknownLabel,
  QueryEvidenceOverlap,
  PartialAssignment,
  ZeroProbabilityEvidence,
  RejectionCapExceeded,
  LabelOutOfDomain,
  MissingHour,
  DuplicateHour,
  UnknownActivityLabel,
  NonMonotonicThresholds,
  NonPhysicalTemperature,
  SegmentStraddlesNeutralPlane,
  OutOfOpening,
  NoBuoyancy,
  NonPositiveTimestep,
  RaggedTraces,
  BeliefVariableMismatch,
  ConfigError,
  FileNotFound,
  IoError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::IncompleteCpt: return "IncompleteCpt";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::QueryEvidenceOverlap: return "QueryEvidenceOverlap";
    case ErrorCode::PartialAssignment: return "PartialAssignment";
    case ErrorCode::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case ErrorCode::RejectionCapExceeded: return "RejectionCapExceeded";
    case ErrorCode::LabelOutOfDomain: return "LabelOutOfDomain";
    case ErrorCode::MissingHour: return "MissingHour";
    case ErrorCode::DuplicateHour: return "DuplicateHour";
    case ErrorCode::UnknownActivityLabel: return "UnknownActivityLabel";
    case ErrorCode::NonMonotonicThresholds: return "NonMonotonicThresholds";
    case ErrorCode::NonPhysicalTemperature: return "NonPhysicalTemperature";
    case ErrorCode::SegmentStraddlesNeutralPlane: return "SegmentStraddlesNeutralPlane";
    case ErrorCode::OutOfOpening: return "OutOfOpening";
    case ErrorCode::NoBuoyancy: return "NoBuoyancy";
    case ErrorCode::NonPositiveTimestep: return "NonPositiveTimestep";
    case ErrorCode::RaggedTraces: return "RaggedTraces";
    case ErrorCode::BeliefVariableMismatch: return "BeliefVariableMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ValidationIssue {
  ErrorCode code;
  std::string message;
};

inline std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += error_code_name(issue.code);
    out += ": ";
    out += issue.message;
  }
  return out;
}

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the raw 64-bit stream. mt19937_64 output
// is fully specified by the standard, so draws are identical on every platform,
// unlike the std distribution adapters.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// SplitMix64 finalizer. Bijective on 64-bit words; used to derive independent
// per-run and per-stream seeds from a master seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace occusim
