#include "ncsigma/report.hpp"

#include <algorithm>
#include <sstream>

namespace ncsigma {

void ModelReport::add_check(std::string name, bool pass, double value, double threshold,
                            std::string note) {
  checks.push_back({std::move(name), pass, value, threshold, std::move(note)});
}

bool ModelReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

int ModelReport::exit_code() const {
  if (!errors.empty()) return kExitNumerical;
  return all_pass() ? kExitOk : kExitInvariant;
}

nlohmann::json to_json(const ModelReport& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["theta"] = r.theta;
  j["inputs"] = r.inputs;
  j["energy"] = r.energy ? nlohmann::json(*r.energy) : nlohmann::json();
  j["residuals"] = r.residuals;
  j["chern"] = r.chern ? nlohmann::json(*r.chern) : nlohmann::json();
  j["tolerances"] = r.tolerances;
  j["convergence"] = r.convergence;
  j["metrics"] = r.metrics;
  j["config"] = r.config;
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json cj = {{"name", c.name}, {"pass", c.pass}, {"value", c.value},
                         {"threshold", c.threshold}};
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  if (!r.rows.empty()) j["rows"] = r.rows;
  auto errs = nlohmann::json::array();
  for (const auto& e : r.errors) {
    errs.push_back({{"kind", e.kind}, {"message", e.message}, {"detail", e.detail}});
  }
  j["errors"] = std::move(errs);
  j["pass"] = r.all_pass() && r.errors.empty();
  return j;
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

// Documented column order; unknown keys follow alphabetically.
constexpr const char* kColumnOrder[] = {
    "N", "theta", "lambda_re", "lambda_im", "tau", "c1", "S_D", "idempotent", "self_adjoint",
    "tail_mass", "self_duality", "anti_self_duality", "el_residual", "L_D_W", "E_W",
    "chiral_residual_W", "iterations", "inversion_residual", "status", "error", "param", "value"};

std::string table(const nlohmann::json& rows, bool checks = false) {
  std::ostringstream os;
  if (rows.empty()) return {};
  std::vector<std::string> cols;
  const auto& first = rows.front();
  if (checks) {
    cols = {"check", "pass", "value", "threshold"};
  } else {
    for (const char* k : kColumnOrder) {
      if (first.contains(k)) cols.emplace_back(k);
    }
    for (const auto& [k, _] : first.items()) {
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : std::string());
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string to_csv(const ModelReport& r) {
  if (!r.rows.empty()) return table(r.rows);
  if (!r.convergence.empty()) return table(r.convergence);
  auto rows = nlohmann::json::array();
  for (const auto& c : r.checks) {
    rows.push_back({{"check", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}});
  }
  return table(rows, true);
}

std::string render(const ModelReport& r, OutputFormat f) {
  if (f == OutputFormat::csv) return to_csv(r);
  return to_json(r).dump(2) + "\n";
}

}  // namespace ncsigma
