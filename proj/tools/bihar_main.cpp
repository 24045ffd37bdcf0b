#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "bihar/commands.hpp"
#include "bihar/error.hpp"
#include "bihar/model_io.hpp"

int main(int argc, char** argv) {
  using namespace bihar;
  CLI::App app{"Curvature, tension and bitension checks for Lorentzian frame models"};
  app.require_subcommand(1);

  std::string model_path, builtin, out_path, c_grid, family = "constant";
  std::vector<std::string> assignments;
  std::optional<double> c;
  bool json = false;

  const std::map<std::string, std::string> descriptions = {
      {"verify", "check frame orthonormality, bracket structure and curvature identities"},
      {"connection", "connection coefficients, closed form against the Koszul oracle"},
      {"curvature", "curvature components, sectional curvatures and O'Neill tensors"},
      {"tension", "tension field at each sample point"},
      {"bitension", "bitension field, closed form against the generic oracle"},
      {"classify", "space-form verdict: harmonic, no biharmonic possible, or inconsistent"},
      {"scan", "sweep a data family over a grid of curvature values"},
  };
  for (const auto& name : command_names()) {
    const auto it = descriptions.find(name);
    auto* sub = app.add_subcommand(name, it == descriptions.end() ? "" : it->second);
    if (name != "scan") {
      auto* m = sub->add_option("--model", model_path, "model file, or a built-in model name");
      auto* b = sub->add_option("--builtin", builtin, "built-in model: example1, flat-product, constant-data");
      m->excludes(b);
      sub->add_option("--set", assignments, "override a model constant, NAME=VALUE (repeatable)");
    } else {
      sub->add_option("--c-grid", c_grid, "comma-separated curvature values");
      sub->add_option("--family", family, "data family: constant, riccati, zero, random");
    }
    if (name == "curvature" || name == "classify") sub->add_option("--c", c, "space-form curvature");
    sub->add_flag("--json", json, "emit the JSON report");
    sub->add_option("--out", out_path, "write the report to a file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  try {
    Overrides overrides;
    for (const auto& a : assignments) overrides.push_back(parse_assignment(a));
    std::optional<FrameModel> model;
    if (!model_path.empty())
      model = load_model(model_path, overrides);
    else if (!builtin.empty())
      model = model_from_json(builtin_model(builtin), overrides);

    RunOptions options;
    options.c = c;
    options.family = family;
    if (!c_grid.empty()) options.c_grid = parse_grid(c_grid);

    const Report report = run(command, model ? &*model : nullptr, options);
    const std::string text = json ? report.json.dump(2) + "\n" : render_text(report.json);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw Error("cannot write '" + out_path + "'");
      out << text;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "wall time: " << seconds << " s\n";
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
