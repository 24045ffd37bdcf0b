#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bihar/classify.hpp"
#include "bihar/geometry.hpp"

namespace bihar {

std::vector<std::string> command_names();

struct RunOptions {
  std::optional<double> c;        // overrides the model's space_form_c
  std::vector<double> c_grid;     // scan only
  std::string family = "constant";  // scan only
};

struct Report {
  Json json;
  int exit_code = 0;  // 0 success, 2 inconsistent data
};

/// Executes a subcommand. `model` may be null only for "scan".
/// Throws Error subclasses for usage problems; per-point numeric failures are
/// recorded in the report instead.
Report run(const std::string& command, const FrameModel* model, const RunOptions& options);

/// Human-readable rendering derived solely from the JSON report.
std::string render_text(const Json& report);

/// "0.25,0.5,1" -> {0.25, 0.5, 1}. Throws ModelError.
std::vector<double> parse_grid(const std::string& text);

}  // namespace bihar
