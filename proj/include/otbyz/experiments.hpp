#pragma once

// Parameter sweeps over the detection model and their CSV interchange format.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "otbyz/model.hpp"

namespace otbyz {

// An experiment description that cannot be evaluated.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file could not be read or written; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepParam { kN, kSignal, kAttack, kAlpha };

enum class Metric {
  kPeAnalytic,
  kPeEmpirical,
  kNtThm1,
  kNsEmpirical,
  kNsLower,
  kNsUpper,
  kDc,
  kDStar,
};

std::string_view to_string(SweepParam p);
std::string_view to_string(Metric m);
std::optional<SweepParam> parse_sweep_param(std::string_view s);
std::optional<Metric> parse_metric(std::string_view s);
// Monte-Carlo metrics get a companion "<name>_se" column.
bool has_std_error(Metric m);

struct SweepSpec {
  ModelConfig base;
  SweepParam param = SweepParam::kAttack;
  std::vector<double> grid;
  std::vector<Metric> metrics;
  std::uint64_t n_trials = 10000;
  std::uint64_t seed = 0;
  // Execution only; never affects results.
  unsigned threads = 0;
  // Series name used in summaries and output file names.
  std::string label;

  // Throws SpecError.
  void validate() const;
  // Model configuration at one grid value.
  ModelConfig config_at(double value) const;
  // FNV-1a over everything that determines the output.
  std::string config_hash() const;
};

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
};

using Cell = std::optional<double>;

struct SweepResult {
  std::string label;
  // columns[0] is the swept parameter.
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Provenance provenance;

  // Index of a named column; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
};

// Evaluates every requested metric at every grid value, in grid order.
// Metrics that are undefined at a grid point (d_star with alpha0 = 0, bounds
// with N = 1) come back as empty cells.
SweepResult run_sweep(const SweepSpec& spec);

// Writes the CSV and a "<path>.meta.json" sidecar. Empty cells are written as
// NA. Throws IoError.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
// Renders the CSV body exactly as emit_csv writes it.
std::string to_csv(const SweepResult& result);
// Reads a CSV produced by emit_csv, and its sidecar when present. Throws
// IoError or SpecError on malformed input.
SweepResult parse_csv(const std::filesystem::path& path);

// Aligned text table with the extrema of ns_* (minimum) and pe_* (maximum).
std::string summarize(const SweepResult& result);

// Series of the named figure preset (fig1a, fig1b, fig2, fig3, fig4). Throws
// SpecError for an unknown name.
std::vector<SweepSpec> make_preset(std::string_view name, bool paper_scale);

// Parses "a:b:step" (inclusive) or a comma list. Throws SpecError.
std::vector<double> parse_grid(std::string_view text);

}  // namespace otbyz
