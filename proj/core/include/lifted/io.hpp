#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifted/experiments.hpp"
#include "lifted/geometry.hpp"
#include "lifted/measure.hpp"
#include "lifted/model.hpp"
#include "lifted/rounding.hpp"
#include "lifted/solver.hpp"

namespace lifted {

/// "%.17g" rendering, which round-trips through strtod. Non-finite values
/// render as null.
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// {"link", "seed", "n", "m", "offset_count", "signal": {"x0", "k"}, "design": [[...]], "y"}
std::string ensemble_to_json(const Ensemble& ensemble);
/// Throws ParseError on malformed documents and DimensionError on
/// inconsistent shapes.
Ensemble ensemble_from_json(std::string_view text);

std::string moments_to_json(const std::string& link_id, const ModelMoments& moments);

struct SolveSummary {
  ProgramSpec spec;
  SolverReport report;
  std::optional<RecoveryMetrics> metrics;
  double mu_q = 0.0;
};
std::string report_to_json(const SolveSummary& summary);

std::string width_to_json(const std::string& cone, const WidthEstimate& estimate);

/// Fields mirror ExperimentConfig:
///   {"name", "link", "n", "m_grid", "k": int | "dense" | null, "trials",
///    "base_seed", "methods": [...], "mu_tilde": "auto" | v | {"sweep": [...]},
///    "l1": "off" | "auto" | v, "solver": {"max_iter", "rel_tol", "window",
///    "step": "fixed" | "backtracking", "algorithm": "projected-gradient" |
///    "three-operator", "splitting_tol", "dykstra_tol", "dykstra_max_iter"},
///    "output", "timing", "workers"}
/// Missing fields keep their defaults. Throws ParseError and ConfigError.
ExperimentConfig config_from_json(std::string_view text);

extern const char* const kCsvHeader;

std::string rows_to_csv(const std::vector<ResultRow>& rows);
/// Throws ParseError if the header or a field does not match the schema.
std::vector<ResultRow> rows_from_csv(std::string_view text);

}  // namespace lifted
