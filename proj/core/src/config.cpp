#include "ncsigma/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

namespace ncsigma {

namespace {

std::string normalize_key(std::string_view key) {
  std::string k(key);
  for (auto& c : k) {
    if (c == '-') c = '_';
  }
  return k;
}

std::string_view strip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw UsageError("theta must lie in (0, 1)");
  if (trunc_box < 1) throw UsageError("trunc must be >= 1");
  if (grid_points < 3 || grid_points % 2 == 0) throw UsageError("grid-points must be odd and >= 3");
  if (!(grid_L > 0.0)) throw UsageError("grid-l must be positive");
  try {
    tolerances.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

double parse_real(std::string_view s, std::string_view what) {
  s = strip(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw UsageError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

long long parse_integer(std::string_view s, std::string_view what) {
  s = strip(s);
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

OutputFormat parse_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw UsageError("format must be json or csv");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

void apply_setting(RunConfig& cfg, std::string_view key_in, std::string_view value) {
  const std::string key = normalize_key(strip(key_in));
  value = strip(value);
  if (key == "theta") {
    cfg.theta = parse_real(value, key);
  } else if (key == "lambda_re") {
    cfg.lambda.real(parse_real(value, key));
  } else if (key == "lambda_im") {
    cfg.lambda.imag(parse_real(value, key));
  } else if (key == "trunc") {
    cfg.trunc_box = static_cast<int>(parse_integer(value, key));
  } else if (key == "grid_l") {
    cfg.grid_L = parse_real(value, key);
  } else if (key == "grid_points") {
    cfg.grid_points = static_cast<int>(parse_integer(value, key));
  } else if (key == "alg_eps") {
    cfg.tolerances.algebraic_eps = parse_real(value, key);
  } else if (key == "trunc_eps") {
    cfg.tolerances.truncation_eps = parse_real(value, key);
  } else if (key == "quad_eps") {
    cfg.tolerances.quadrature_eps = parse_real(value, key);
  } else if (key == "seed") {
    const auto s = parse_integer(value, key);
    if (s < 0) throw UsageError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "format") {
    cfg.output_format = parse_format(value);
  } else if (key == "out") {
    cfg.output_path = std::string(value);
  } else {
    throw UsageError("unknown config key: " + key);
  }
}

void parse_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = strip(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, sv.substr(0, eq), sv.substr(eq + 1));
  }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  parse_config(in, cfg);
}

void to_json(nlohmann::json& j, const Tolerance& tol) {
  j = {{"algebraic_eps", tol.algebraic_eps},
       {"truncation_eps", tol.truncation_eps},
       {"quadrature_eps", tol.quadrature_eps}};
}

void to_json(nlohmann::json& j, const RunConfig& cfg) {
  j = {{"theta", cfg.theta},
       {"lambda", {cfg.lambda.real(), cfg.lambda.imag()}},
       {"trunc_box", cfg.trunc_box},
       {"grid_L", cfg.grid_L},
       {"grid_points", cfg.grid_points},
       {"tolerances", cfg.tolerances},
       {"seed", cfg.seed},
       {"format", std::string(to_string(cfg.output_format))}};
}

}  // namespace ncsigma
