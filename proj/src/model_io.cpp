#include "bihar/model_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "bihar/error.hpp"

namespace bihar {

std::pair<std::string, double> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ModelError("expected NAME=VALUE, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  const std::string rhs = text.substr(eq + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), value);
  if (ec != std::errc() || ptr != rhs.data() + rhs.size() || rhs.empty())
    throw ModelError("value of '" + name + "' is not a number: '" + rhs + "'");
  return {name, value};
}

std::vector<std::string> builtin_names() { return {"example1", "flat-product", "constant-data"}; }

Json builtin_model(const std::string& name) {
  if (name == "example1") {
    return Json::parse(R"({
      "schema_version": 1,
      "name": "example1",
      "mode": "chart",
      "chart": {"coords": ["x", "y", "z"], "domain": [[0.5, 3], [-1, 1], [-1, 1]], "grid": [24, 1, 1]},
      "constants": {"c": 1},
      "frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1/sinh(c*x/2)^2"]],
      "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-sinh(c*x/2)^4"]]
    })");
  }
  if (name == "flat-product") {
    return Json::parse(R"({
      "schema_version": 1,
      "name": "flat-product",
      "mode": "chart",
      "chart": {"coords": ["x", "y", "z"], "domain": [[-1, 1], [-1, 1], [-1, 1]], "grid": [3, 3, 3]},
      "constants": {},
      "frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
      "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]],
      "space_form_c": 0
    })");
  }
  if (name == "constant-data") {
    return Json::parse(R"({
      "schema_version": 1,
      "name": "constant-data",
      "mode": "data",
      "chart": {"coords": ["x", "y", "z"], "domain": [[-1, 1], [-1, 1], [-1, 1]], "grid": [3, 3, 3]},
      "constants": {"F1": 0, "F2": 0, "K1": 0, "K2": 0, "S": 0, "c": 0},
      "data": {"f1": "F1", "f2": "F2", "k1": "K1", "k2": "K2", "sigma": "S"},
      "space_form_c": "c"
    })");
  }
  throw UnknownModel(name);
}

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ModelError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ModelError(where + ": expected a number");
  return j.get<double>();
}

std::string string_at(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ModelError(where + ": expected an expression string");
  return j.get<std::string>();
}

Expr expr_at(const Json& j, const SymbolTable& symbols, const std::string& where) {
  if (j.is_number()) return Expr::number(j.get<double>());
  try {
    return parse(string_at(j, where), symbols);
  } catch (const SyntaxError& e) {
    throw ModelError(where + ": " + e.what());
  } catch (const UnknownSymbol& e) {
    throw ModelError(where + ": " + e.what());
  }
}

Chart chart_from_json(const Json& j) {
  std::array<std::string, 3> coords;
  const auto& cj = require(j, "coords", "chart");
  if (!cj.is_array() || cj.size() != 3) throw ModelError("chart.coords: expected three symbols");
  for (int a = 0; a < 3; ++a) coords[a] = string_at(cj[a], "chart.coords");

  std::array<Interval, 3> domain;
  const auto& dj = require(j, "domain", "chart");
  if (!dj.is_array() || dj.size() != 3) throw ModelError("chart.domain: expected three intervals");
  for (int a = 0; a < 3; ++a) {
    if (!dj[a].is_array() || dj[a].size() != 2) throw ModelError("chart.domain: expected [lo, hi]");
    domain[a] = {number_at(dj[a][0], "chart.domain"), number_at(dj[a][1], "chart.domain")};
  }

  if (j.contains("points")) {
    std::vector<Point> points;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 3) throw ModelError("chart.points: expected [x, y, z]");
      points.push_back({number_at(p[0], "chart.points"), number_at(p[1], "chart.points"),
                        number_at(p[2], "chart.points")});
    }
    return Chart(coords, domain, std::move(points));
  }
  std::array<int, 3> grid{3, 3, 3};
  if (j.contains("grid")) {
    const auto& gj = j.at("grid");
    if (!gj.is_array() || gj.size() != 3) throw ModelError("chart.grid: expected [n, n, n]");
    for (int a = 0; a < 3; ++a) {
      if (!gj[a].is_number_integer()) throw ModelError("chart.grid: expected integers");
      grid[a] = gj[a].get<int>();
    }
  }
  return Chart::with_grid(coords, domain, grid);
}

}  // namespace

FrameModel model_from_json(const Json& doc, const Overrides& overrides) {
  if (!doc.is_object()) throw ModelError("model file must be a JSON object");
  const auto& version = require(doc, "schema_version", "model");
  if (!version.is_number_integer() || version.get<int>() != 1) throw ModelError("unsupported schema_version");

  const std::string name = doc.contains("name") ? string_at(doc.at("name"), "name") : "unnamed";
  const std::string mode = string_at(require(doc, "mode", "model"), "mode");
  Chart chart = chart_from_json(require(doc, "chart", "model"));

  Constants constants;
  if (doc.contains("constants")) {
    const auto& cj = doc.at("constants");
    if (!cj.is_object()) throw ModelError("constants: expected an object");
    for (const auto& [k, v] : cj.items()) constants[k] = number_at(v, "constants." + k);
  }
  for (const auto& [k, v] : overrides) {
    auto it = constants.find(k);
    if (it == constants.end()) throw ModelError("--set names undeclared constant '" + k + "'");
    it->second = v;
  }

  SymbolTable symbols;
  symbols.coords = chart.coords();
  for (const auto& [k, v] : constants) {
    if (symbols.is_coordinate(k)) throw ModelError("constant '" + k + "' shadows a coordinate");
    symbols.constants.insert(k);
  }

  std::variant<ChartMode, DataMode> body;
  if (mode == "chart") {
    ChartMode cm;
    const auto& fj = require(doc, "frame", "model");
    const auto& mj = require(doc, "metric", "model");
    if (!fj.is_array() || fj.size() != 3 || !mj.is_array() || mj.size() != 3)
      throw ModelError("frame and metric must be 3x3 arrays");
    for (int i = 0; i < 3; ++i) {
      if (!fj[i].is_array() || fj[i].size() != 3 || !mj[i].is_array() || mj[i].size() != 3)
        throw ModelError("frame and metric must be 3x3 arrays");
      for (int a = 0; a < 3; ++a) {
        const std::string at = "[" + std::to_string(i) + "][" + std::to_string(a) + "]";
        cm.frame[i].coeffs[a] = expr_at(fj[i][a], symbols, "frame" + at);
        cm.metric[i][a] = expr_at(mj[i][a], symbols, "metric" + at);
      }
    }
    body = std::move(cm);
  } else if (mode == "data") {
    const auto& dj = require(doc, "data", "model");
    auto field = [&](const char* key) { return expr_at(require(dj, key, "data"), symbols, std::string("data.") + key); };
    body = DataMode{field("f1"), field("f2"), field("k1"), field("k2"), field("sigma")};
  } else {
    throw ModelError("mode must be \"chart\" or \"data\"");
  }

  std::optional<Expr> space_form_c;
  if (doc.contains("space_form_c")) space_form_c = expr_at(doc.at("space_form_c"), symbols, "space_form_c");

  FrameModel model{name, std::move(chart), std::move(constants), std::move(body), std::move(space_form_c)};
  validate_structure(model);
  if (model.is_chart()) {
    const double defect = orthonormality_defect(model);
    if (defect > kOrthonormalTolerance)
      throw ModelError("frame is not orthonormal for the metric (defect " + std::to_string(defect) + ")");
  }
  return model;
}

FrameModel load_model(const std::string& path_or_name, const Overrides& overrides) {
  if (std::filesystem::is_regular_file(path_or_name)) {
    std::ifstream in(path_or_name);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ModelError(path_or_name + ": " + e.what());
    }
    return model_from_json(doc, overrides);
  }
  return model_from_json(builtin_model(path_or_name), overrides);
}

}  // namespace bihar
