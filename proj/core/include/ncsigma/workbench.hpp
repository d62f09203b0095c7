#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "ncsigma/config.hpp"
#include "ncsigma/heisenberg_module.hpp"
#include "ncsigma/report.hpp"

namespace ncsigma {

inline constexpr std::array<int, 4> kConvergenceBoxes{8, 16, 24, 32};

/// Quantities of one instanton run, flattened for tables.
nlohmann::json instanton_row(const Instanton& inst);

/// Instanton plus the derived energies and a convergence table over
/// kConvergenceBoxes. Numerical failures become error records.
ModelReport cmd_instanton(const RunConfig& config);

enum class SweepParam { theta, lambda, trunc };
SweepParam parse_sweep_param(std::string_view s);
std::string_view to_string(SweepParam p);

/// Rows are evaluated concurrently and reported sorted by value. Throws
/// UsageError on an empty value list.
ModelReport cmd_sweep(const RunConfig& config, SweepParam param, std::vector<double> values);

enum class ModelKind { chiral, endo, su2 };
ModelKind parse_model_kind(std::string_view s);

/// args: (m, n) for chiral, (p, q, r, s) for endo and su2. Invalid arguments
/// throw UsageError naming the violated condition.
ModelReport cmd_models(const RunConfig& config, ModelKind model, const std::vector<int>& args);

enum class Suite { algebra, module, models, symmetry, all };
Suite parse_suite(std::string_view s);
std::string_view to_string(Suite s);

struct VerifyOptions {
  /// Conjugation map used by the symmetry suite; replaceable for negative controls.
  std::function<TorusElement(LatticePoint, const TorusElement&)> ad;
  VerifyOptions();
};

ModelReport cmd_verify(const RunConfig& config, Suite suite, const VerifyOptions& opts = {});

}  // namespace ncsigma
