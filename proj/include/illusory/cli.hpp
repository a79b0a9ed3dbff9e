#pragma once

// Command-line pipeline: load inducers, build the canyon, iterate, threshold,
// and write the run artefacts into an output directory.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "illusory/canyon.hpp"

namespace illusory::cli {

enum ExitCode : int { kExitConverged = 0, kExitInputError = 1, kExitMaxOuter = 2 };

struct RunOptions {
  std::filesystem::path input;
  std::filesystem::path out_dir = "run";
  double alpha = 0.1;
  double beta = 1.0;
  double lambda = 1.0;
  double epsilon_factor = 3.0;
  double sigma_factor = 2.0;
  double gain = 3.0;
  EdgeKind g_kind = EdgeKind::kExpSquare;
  bool raw_gradient = false;
  double delta = 1e-6;
  long max_outer = 5000;
  double cg_tol = 1e-10;
  double threshold = 0.5;
  int presmooth = 0;
  long snapshot_every = 0;
  bool invert = false;
  int bin_threshold = 128;
};

/// Resolved parameters and results of one run, as written to summary.json.
/// Wall time lives under the "elapsed_seconds" key only.
nlohmann::json parameters_to_json(const RunOptions& opts);

/// Inverse of parameters_to_json; `input` is taken from the summary too.
RunOptions options_from_summary(const nlohmann::json& summary);

/// Runs the full pipeline. Never throws: errors are reported on `err` and
/// mapped to kExitInputError.
int run_command(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and dispatches to run_command.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace illusory::cli
