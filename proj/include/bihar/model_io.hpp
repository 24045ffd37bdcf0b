#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bihar/classify.hpp"
#include "bihar/geometry.hpp"

namespace bihar {

using Overrides = std::vector<std::pair<std::string, double>>;

/// "name=value" -> (name, value). Throws ModelError.
std::pair<std::string, double> parse_assignment(const std::string& text);

std::vector<std::string> builtin_names();

/// The model file of a built-in model. Throws UnknownModel.
Json builtin_model(const std::string& name);

/// Builds and validates a model from a schema-v1 document. Overrides replace
/// declared constants; naming an undeclared constant is an error.
/// Throws ModelError, including for malformed or unresolved expressions.
FrameModel model_from_json(const Json& doc, const Overrides& overrides = {});

/// Reads a model file; when no file exists at `path_or_name` the argument is
/// looked up among the built-in models.
FrameModel load_model(const std::string& path_or_name, const Overrides& overrides = {});

inline constexpr double kOrthonormalTolerance = 1e-10;

}  // namespace bihar
