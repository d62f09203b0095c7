#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "ncsigma/torus_algebra.hpp"

namespace ncsigma {

/// Bad command-line or config input; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { json, csv };

struct RunConfig {
  double theta = 0.2;
  Complex lambda{0.0, 0.0};
  int trunc_box = 32;
  double grid_L = 20.0;
  int grid_points = 4001;
  Tolerance tolerances{};
  std::uint64_t seed = 1;
  OutputFormat output_format = OutputFormat::json;
  std::string output_path;  // empty = stdout

  /// Throws UsageError unless trunc_box >= 1, grid_points >= 3 and odd,
  /// 0 < theta < 1 and the tolerances are positive.
  void validate() const;
};

/// Recognized keys: theta, lambda_re, lambda_im, trunc, grid_l, grid_points,
/// alg_eps, trunc_eps, quad_eps, seed, format, out. Dashes and underscores are
/// interchangeable.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// key=value lines; '#' starts a comment; blank lines are ignored.
void parse_config(std::istream& in, RunConfig& cfg);
void load_config_file(const std::string& path, RunConfig& cfg);

OutputFormat parse_format(std::string_view s);
std::string_view to_string(OutputFormat f);

double parse_real(std::string_view s, std::string_view what);
long long parse_integer(std::string_view s, std::string_view what);

void to_json(nlohmann::json& j, const RunConfig& cfg);
void to_json(nlohmann::json& j, const Tolerance& tol);

}  // namespace ncsigma
