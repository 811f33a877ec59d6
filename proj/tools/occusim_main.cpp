// occusim command-line front end: validate inputs, run single simulations and
// Monte Carlo ensembles, learn CPTs from observations, and emit plot data.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "occusim/occusim.hpp"

namespace fs = std::filesystem;
using namespace occusim;

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level_from_env() {
  const char* raw = std::getenv("OCCUSIM_LOG");
  if (raw == nullptr) return LogLevel::Warn;
  const std::string value(raw);
  if (value == "error") return LogLevel::Error;
  if (value == "warn") return LogLevel::Warn;
  if (value == "info") return LogLevel::Info;
  if (value == "debug") return LogLevel::Debug;
  std::cerr << "occusim: ignoring unknown OCCUSIM_LOG level '" << value << "'\n";
  return LogLevel::Warn;
}

LogLevel g_log_level = LogLevel::Warn;

void log_line(LogLevel level, const std::string& message) {
  if (level > g_log_level) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "occusim [" << names[static_cast<int>(level)] << "] " << message << '\n';
}

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// ---------------------------------------------------------------- validate

struct FileReport {
  std::string kind;
  std::vector<std::string> problems;
};

FileReport validate_one(const fs::path& path) {
  FileReport report;
  if (!fs::exists(path)) {
    report.kind = "missing";
    report.problems.push_back("file not found: " + path.string());
    return report;
  }
  try {
    if (path.extension() == ".csv") {
      report.kind = "calendar";
      occupant::load_calendar(path);
      return report;
    }
    const auto doc = bn::load_json_file(path);
    if (bn::is_two_slice_json(doc)) {
      report.kind = "two-slice network";
      const auto spec = bn::two_slice_from_json(doc);
      for (const auto& issue : bn::validate_two_slice(spec)) {
        report.problems.push_back(std::string(error_code_name(issue.code)) + ": " + issue.message);
      }
      return report;
    }
    if (doc.is_object() && doc.contains("variables")) {
      report.kind = "network";
      const auto spec = bn::network_from_json(doc);
      for (const auto& issue : bn::validate_network(spec)) {
        report.problems.push_back(std::string(error_code_name(issue.code)) + ": " + issue.message);
      }
      return report;
    }
    report.kind = "scenario";
    cosim::scenario_from_json(doc, path.parent_path());
    return report;
  } catch (const Error& e) {
    report.problems.push_back(e.what());
  } catch (const std::exception& e) {
    report.problems.push_back(e.what());
  }
  return report;
}

int cmd_validate(const std::vector<std::string>& paths) {
  bool all_valid = true;
  for (const auto& raw : paths) {
    const fs::path path(raw);
    const auto report = validate_one(path);
    if (report.problems.empty()) {
      std::cout << path.string() << ": OK (" << report.kind << ")\n";
    } else {
      all_valid = false;
      std::cout << path.string() << ": FAIL (" << report.kind << ")\n";
      for (const auto& problem : report.problems) std::cout << "  - " << problem << '\n';
    }
  }
  return all_valid ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------- simulate

nlohmann::json effective_config_doc(const fs::path& config_path, const std::optional<std::uint64_t>& seed_override) {
  auto doc = bn::load_json_file(config_path);
  if (seed_override) doc["seed"] = *seed_override;
  return doc;
}

io::RunManifest make_manifest(const nlohmann::json& effective_doc, const fs::path& config_path,
                              std::uint64_t master_seed) {
  io::RunManifest manifest;
  manifest.config_hash = io::config_hash(effective_doc);
  manifest.master_seed = master_seed;
  manifest.created_utc = io::utc_now_iso8601();
  manifest.config_path = config_path.string();
  return manifest;
}

int cmd_simulate(const std::string& config_arg, std::optional<std::uint64_t> seed_override,
                 const std::string& out_dir) {
  const fs::path config_path(config_arg);

  cosim::ScenarioConfig cfg;
  nlohmann::json effective_doc;
  try {
    cfg = cosim::load_scenario(config_path);
    if (seed_override) cfg.seed = *seed_override;
    effective_doc = effective_config_doc(config_path, seed_override);
  } catch (const std::exception& e) {
    std::cerr << "occusim simulate: " << e.what() << '\n';
    return kExitConfig;
  }
  log_line(LogLevel::Info, "scenario '" + cfg.name + "': " + std::to_string(cfg.horizon_steps) + " steps, dt=" +
                               std::to_string(cfg.dt_s) + " s, seed=" + std::to_string(cfg.seed));

  try {
    const fs::path out(out_dir);
    fs::create_directories(out);

    auto manifest = make_manifest(effective_doc, config_path, cfg.seed);
    manifest.outputs["trace"] = "trace.csv";
    io::write_manifest(out / "manifest.json", manifest);  // before any trace row

    const auto trace = cosim::run_simulation(cfg);
    io::write_trace(out / "trace.csv", trace);
    std::cout << "wrote " << (out / "manifest.json").string() << " and " << (out / "trace.csv").string() << " ("
              << trace.size() << " rows)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "occusim simulate: " << e.what() << '\n';
    return kExitRuntime;
  }
}

// ---------------------------------------------------------------- mc

int cmd_mc(const std::string& config_arg, std::size_t runs, std::size_t workers,
           std::optional<std::uint64_t> seed_override, const std::string& out_dir, bool keep_traces) {
  const fs::path config_path(config_arg);

  cosim::ScenarioConfig cfg;
  nlohmann::json effective_doc;
  try {
    cfg = cosim::load_scenario(config_path);
    if (seed_override) cfg.seed = *seed_override;
    effective_doc = effective_config_doc(config_path, seed_override);
  } catch (const std::exception& e) {
    std::cerr << "occusim mc: " << e.what() << '\n';
    return kExitConfig;
  }
  log_line(LogLevel::Info, "ensemble of " + std::to_string(runs) + " runs on " + std::to_string(workers) +
                               " worker(s), master seed " + std::to_string(cfg.seed));

  try {
    const fs::path out(out_dir);
    fs::create_directories(out);

    auto manifest = make_manifest(effective_doc, config_path, cfg.seed);
    manifest.outputs["summary"] = "summary.json";
    if (keep_traces) manifest.outputs["traces"] = "traces/";
    io::write_manifest(out / "manifest.json", manifest);

    const auto traces = cosim::run_ensemble(cfg, runs, workers);
    const auto summary = cosim::summarize(traces);
    io::write_summary(out / "summary.json", summary);

    if (keep_traces) {
      fs::create_directories(out / "traces");
      for (std::size_t i = 0; i < traces.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "trace_%04zu.csv", i);
        io::write_trace(out / "traces" / name, traces[i]);
      }
    }
    std::cout << "wrote " << (out / "summary.json").string() << " (" << summary.runs << " runs, "
              << summary.hours.size() << " hours)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "occusim mc: " << e.what() << '\n';
    return kExitRuntime;
  }
}

// ---------------------------------------------------------------- learn

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // trim
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.erase(field.begin());
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.pop_back();
    fields.push_back(std::move(field));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fields;
}

int cmd_learn(const std::string& structure_arg, const std::string& observations_arg, double prior,
              const std::string& out_file) {
  try {
    const auto structure = bn::load_network(structure_arg);

    std::ifstream in(observations_arg);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + observations_arg + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ConfigError, "observations file is empty");
    const auto columns = split_csv_line(line);

    std::set<std::string> expected;
    for (const auto& var : structure.variables) expected.insert(var.name);
    std::set<std::string> got(columns.begin(), columns.end());
    if (expected != got) {
      std::ostringstream diff;
      diff << "observation columns do not match the structure variables;";
      for (const auto& name : expected) {
        if (!got.count(name)) diff << " missing '" << name << "'";
      }
      for (const auto& name : got) {
        if (!expected.count(name)) diff << " unexpected '" << name << "'";
      }
      throw Error(ErrorCode::ConfigError, diff.str());
    }

    std::vector<bn::Assignment> observations;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != columns.size()) {
        throw Error(ErrorCode::ConfigError, "observations row " + std::to_string(row) + " has " +
                                                std::to_string(fields.size()) + " fields, expected " +
                                                std::to_string(columns.size()));
      }
      bn::Assignment observation;
      for (std::size_t i = 0; i < columns.size(); ++i) observation[columns[i]] = fields[i];
      observations.push_back(std::move(observation));
    }
    log_line(LogLevel::Info, "learning from " + std::to_string(observations.size()) + " records, prior strength " +
                                 io::format_g6(prior));

    const auto learned = bn::learn_cpts(structure, observations, prior);
    bn::save_json_file(out_file, bn::network_to_json(learned));
    std::cout << "wrote " << out_file << '\n';
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "occusim learn: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kExitRuntime : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "occusim learn: " << e.what() << '\n';
    return kExitConfig;
  }
}

// ---------------------------------------------------------------- plot-data

int cmd_plotdata(const std::string& input_arg, const std::string& out_file) {
  try {
    const fs::path input(input_arg);
    if (!fs::exists(input)) throw Error(ErrorCode::FileNotFound, "cannot open '" + input.string() + "'");
    std::string content;
    if (input.extension() == ".csv") {
      content = io::trace_plotdata(io::read_trace(input));
    } else {
      content = io::summary_plotdata(io::read_summary(input));
    }
    io::write_plotdata(out_file, content);
    std::cout << "wrote " << out_file << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "occusim plot-data: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  g_log_level = log_level_from_env();

  CLI::App app{"occusim: stochastic occupant/door co-simulation of office CO2"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // validate
  auto* validate = app.add_subcommand("validate", "Validate networks, calendars and scenario configs");
  std::vector<std::string> validate_paths;
  validate->add_option("paths", validate_paths, "files to validate")->required()->expected(-1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one co-simulation and write trace.csv + manifest.json");
  std::string sim_config;
  std::string sim_out = ".";
  std::optional<std::uint64_t> sim_seed;
  simulate->add_option("config", sim_config, "scenario config JSON")->required();
  simulate->add_option("--seed", sim_seed, "override the config master seed");
  simulate->add_option("--out", sim_out, "output directory (default .)");

  // mc
  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo ensemble and write summary.json");
  std::string mc_config;
  std::string mc_out = ".";
  std::size_t mc_runs = 0;
  std::size_t mc_workers = 1;
  std::optional<std::uint64_t> mc_seed;
  bool mc_traces = false;
  mc->add_option("config", mc_config, "scenario config JSON")->required();
  mc->add_option("--runs", mc_runs, "number of runs")->required()->check(CLI::PositiveNumber);
  mc->add_option("--workers", mc_workers, "worker threads (default 1)")->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_seed, "override the config master seed");
  mc->add_option("--out", mc_out, "output directory (default .)");
  mc->add_flag("--traces", mc_traces, "also write per-run trace CSVs");

  // learn
  auto* learn = app.add_subcommand("learn", "Learn CPTs for a structure from observations CSV");
  std::string learn_structure;
  std::string learn_observations;
  std::string learn_out = "learned_network.json";
  double learn_prior = 1.0;
  learn->add_option("structure", learn_structure, "network structure JSON (empty tables)")->required();
  learn->add_option("observations", learn_observations, "CSV of full assignments")->required();
  learn->add_option("--prior", learn_prior, "pseudo-count per cell (default 1)")->check(CLI::NonNegativeNumber);
  learn->add_option("--out", learn_out, "output network file");

  // plot-data
  auto* plotdata = app.add_subcommand("plot-data", "Emit gnuplot-ready columns from a trace or summary");
  std::string plot_input;
  std::string plot_out = "plot.dat";
  plotdata->add_option("input", plot_input, "trace.csv or summary.json")->required();
  plotdata->add_option("--out", plot_out, "output column file (default plot.dat)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitConfig;
  }

  if (validate->parsed()) return cmd_validate(validate_paths);
  if (simulate->parsed()) return cmd_simulate(sim_config, sim_seed, sim_out);
  if (mc->parsed()) return cmd_mc(mc_config, mc_runs, mc_workers, mc_seed, mc_out, mc_traces);
  if (learn->parsed()) return cmd_learn(learn_structure, learn_observations, learn_prior, learn_out);
  if (plotdata->parsed()) return cmd_plotdata(plot_input, plot_out);
  return kExitConfig;
}
