#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncsigma/config.hpp"

namespace ncsigma {

/// Exit codes of the workbench.
enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitUsage = 2, kExitNumerical = 3 };

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured defect or quantity
  double threshold = 0.0;  // bound it is compared with
  std::string note;
};

struct ErrorRecord {
  std::string kind;  // "inversion", "truncation", "numerical", ...
  std::string message;
  nlohmann::json detail = nlohmann::json::object();
};

/// Result of one workbench command. Every report carries the config and
/// tolerances used, plus any tail-mass accounting in `residuals`/`inputs`.
struct ModelReport {
  std::string model;
  double theta = 0.0;
  nlohmann::json inputs = nlohmann::json::object();
  std::optional<double> energy;
  nlohmann::json residuals = nlohmann::json::object();
  std::optional<double> chern;
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json convergence = nlohmann::json::array();
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  std::vector<Check> checks;
  /// Sweep rows; every row carries the same keys.
  nlohmann::json rows = nlohmann::json::array();
  std::vector<ErrorRecord> errors;

  void add_check(std::string name, bool pass, double value, double threshold, std::string note = {});
  bool all_pass() const;
  int exit_code() const;
};

nlohmann::json to_json(const ModelReport& r);
/// One line per row: sweep rows, else the convergence table, else the checks.
std::string to_csv(const ModelReport& r);
std::string render(const ModelReport& r, OutputFormat f);

}  // namespace ncsigma
