#include "bihar/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "bihar/biharmonic.hpp"
#include "bihar/curvature.hpp"
#include "bihar/error.hpp"
#include "bihar/model_io.hpp"
#include "bihar/submersion.hpp"

namespace bihar {

std::vector<std::string> command_names() {
  return {"verify", "connection", "curvature", "tension", "bitension", "classify", "scan"};
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw ModelError("empty entry in grid list \"" + text + "\"");
    out.push_back(parse_assignment("c=" + item).second);
  }
  return out;
}

namespace {

// Running maxima of |value| keyed by name, in first-seen order.
class Summary {
 public:
  void max_abs(const std::string& key, double v) { update(key, std::abs(v), true); }
  void min(const std::string& key, double v) { update(key, v, false); }
  void set(const std::string& key, Json v) { json_[key] = std::move(v); }
  Json& json() { return json_; }

 private:
  void update(const std::string& key, double v, bool larger) {
    if (!std::isfinite(v)) return;
    if (!json_.contains(key)) {
      json_[key] = v;
      return;
    }
    const double cur = json_[key].get<double>();
    json_[key] = larger ? std::max(cur, v) : std::min(cur, v);
  }
  Json json_ = Json::object();
};

Json point_json(const Point& p) { return Json::array({p[0], p[1], p[2]}); }

Json model_header(const FrameModel& m) {
  Json j;
  j["name"] = m.name;
  j["mode"] = m.is_chart() ? "chart" : "data";
  Json cs = Json::object();
  for (const auto& [k, v] : m.constants) cs[k] = v;
  j["constants"] = cs;
  if (auto c = m.curvature_constant())
    j["space_form_c"] = *c;
  else
    j["space_form_c"] = nullptr;
  j["sample_points"] = m.chart.samples().size();
  return j;
}

// Evaluates `row` at each sample point; failures become per-point errors.
Json per_point(const FrameModel& m, Summary& summary, const std::function<void(const Point&, Json&)>& row) {
  Json rows = Json::array();
  std::size_t errors = 0;
  for (const auto& p : m.chart.samples()) {
    Json r;
    r["point"] = point_json(p);
    try {
      row(p, r);
    } catch (const Error& e) {
      Json failed;
      failed["point"] = point_json(p);
      failed["error"] = e.what();
      r = std::move(failed);
      ++errors;
    }
    rows.push_back(std::move(r));
  }
  summary.set("errors", errors);
  return rows;
}

Json table_json(const Tensor3& g) {
  Json out = Json::array();
  for (const auto& row : g) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(Json::array({v[0], v[1], v[2]}));
    out.push_back(std::move(r));
  }
  return out;
}

double max_diff(const Tensor4& a, const Tensor4& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) m = std::max(m, std::abs(a[i][j][k][l] - b[i][j][k][l]));
  return m;
}

Report verify(const FrameModel& m) {
  Summary s;
  const bool chart = m.is_chart();
  bool adapted = true;
  auto rows = per_point(m, s, [&](const Point& p, Json& r) {
    IntegrabilityData d;
    if (chart) {
      const Mat3 gram = frame_gram(m, p);
      const Mat3 eta = frame_metric();
      double defect = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) defect = std::max(defect, std::abs(gram[i][j] - eta[i][j]));
      r["orthonormality"] = defect;
      s.max_abs("orthonormality_max", defect);
      try {
        d = extract_data(m, p);
      } catch (const NotAdaptedFrame& e) {
        adapted = false;
        r["adapted"] = false;
        r["extraction_residual"] = e.residual();
        s.max_abs("extraction_residual_max", e.residual());
        return;
      }
      r["adapted"] = true;
      r["extraction_residual"] = d.max_residual();
      s.max_abs("extraction_residual_max", d.max_residual());
      const auto& cm = m.chart_mode();
      const auto rebuilt = reassembled_brackets(m, p, d);
      const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
      double worst = 0.0;
      for (int q = 0; q < 3; ++q) {
        const Vec3 b = lie_bracket(cm.frame[pairs[q].first], cm.frame[pairs[q].second], p, m.constants);
        for (int a = 0; a < 3; ++a) worst = std::max(worst, std::abs(b[a] - rebuilt[q][a]));
      }
      r["bracket_reassembly"] = worst;
      s.max_abs("bracket_reassembly_max", worst);
    } else {
      d = data_at(m, p);
    }
    r["f1"] = d.f1.value;
    r["f2"] = d.f2.value;
    r["k1"] = d.k1.value;
    r["k2"] = d.k2.value;
    r["sigma"] = d.sigma.value;
    const double jac = jacobi_residual(d);
    r["jacobi"] = jac;
    s.max_abs("jacobi_max", jac);
    const std::array<double, 5> vert{d.f1.d1[2], d.f2.d1[2], d.k1.d1[2], d.k2.d1[2], d.sigma.d1[2]};
    Json vj = Json::object();
    for (int q = 0; q < 5; ++q) {
      vj[VerticalConstancyReport::names[q]] = vert[q];
      s.max_abs("vertical_max", vert[q]);
    }
    r["vertical"] = vj;
  });
  s.max_abs("vertical_max", 0.0);
  s.max_abs("jacobi_max", 0.0);
  s.set("adapted", adapted);
  s.set("vertical_constant", s.json()["vertical_max"].get<double>() < kVerticalTolerance);
  return {Json{{"points", rows}, {"summary", s.json()}}, 0};
}

Report connection(const FrameModel& m) {
  Summary s;
  const bool chart = m.is_chart();
  auto rows = per_point(m, s, [&](const Point& p, Json& r) {
    const auto d = data_at(m, p);
    const auto closed = connection_closed_form(d);
    r["gamma"] = table_json(closed.gamma);
    const double compat = metric_compatibility_defect(closed);
    r["metric_compatibility"] = compat;
    s.max_abs("metric_compatibility_max", compat);
    if (chart) {
      const auto k = connection_koszul_oracle(m, p);
      const double dk = max_abs_difference(closed, k.table);
      const double dc = max_abs_difference(closed, connection_christoffel_oracle(m, p));
      r["koszul_diff"] = dk;
      r["christoffel_diff"] = dc;
      r["koszul_metric_terms"] = k.metric_derivative_terms;
      s.max_abs("koszul_diff_max", dk);
      s.max_abs("christoffel_diff_max", dc);
      s.max_abs("koszul_metric_terms_max", k.metric_derivative_terms);
    }
  });
  s.set("oracle", chart ? "koszul+christoffel" : "unavailable in data mode");
  return {Json{{"points", rows}, {"summary", s.json()}}, 0};
}

Report curvature(const FrameModel& m, std::optional<double> c) {
  Summary s;
  const bool chart = m.is_chart();
  if (!c) c = m.curvature_constant();
  auto rows = per_point(m, s, [&](const Point& p, Json& r) {
    const auto d = data_at(m, p);
    const auto R = curvature_from_data(d);
    const auto named = named_components(d);
    const auto generic = named_components(R);
    Json nj = Json::object();
    double named_diff = 0.0;
    for (int q = 0; q < 7; ++q) {
      nj[NamedComponents::names[q]] = named.values()[q];
      named_diff = std::max(named_diff, std::abs(named.values()[q] - generic.values()[q]));
    }
    r["components"] = nj;
    r["named_vs_generic"] = named_diff;
    s.max_abs("named_vs_generic_max", named_diff);
    const auto sym = symmetry_defects(R);
    r["antisymmetry"] = sym.antisymmetry;
    r["pair_symmetry"] = sym.pair_symmetry;
    r["bianchi"] = sym.bianchi;
    s.max_abs("antisymmetry_max", sym.antisymmetry);
    s.max_abs("pair_symmetry_max", sym.pair_symmetry);
    s.max_abs("bianchi_max", sym.bianchi);
    r["K12"] = sectional_curvature(R, 0, 1);
    r["K13"] = sectional_curvature(R, 0, 2);
    r["K23"] = sectional_curvature(R, 1, 2);
    r["base_gauss"] = base_gauss_curvature(d);
    const double oneill = check_oneill_equation(d);
    r["oneill_equation"] = oneill;
    s.max_abs("oneill_equation_max", oneill);
    const double identities = oneill_identity_defect(oneill_tensors(d), d);
    r["oneill_identities"] = identities;
    s.max_abs("oneill_identities_max", identities);
    if (c) {
      const double sf = space_form_residual(R, *c);
      r["space_form_residual"] = sf;
      s.max_abs("space_form_residual_max", sf);
    }
    if (chart) {
      const double diff = max_diff(R.R, curvature_chart_oracle(m, p).R);
      r["chart_oracle_diff"] = diff;
      s.max_abs("chart_oracle_diff_max", diff);
    }
  });
  if (c) s.set("c", *c);
  return {Json{{"points", rows}, {"summary", s.json()}}, 0};
}

Report tension_cmd(const FrameModel& m) {
  Summary s;
  const bool chart = m.is_chart();
  auto rows = per_point(m, s, [&](const Point& p, Json& r) {
    const auto d = data_at(m, p);
    const auto t = tension(d);
    r["t1"] = t.t1;
    r["t2"] = t.t2;
    r["norm"] = t.norm();
    s.max_abs("tension_max", t.norm());
    s.min("tension_min", t.norm());
    if (chart) {
      const auto o = tension(connection_koszul_oracle(m, p).table);
      const double diff = std::max(std::abs(o.t1 - t.t1), std::abs(o.t2 - t.t2));
      r["oracle_diff"] = diff;
      s.max_abs("oracle_diff_max", diff);
    }
  });
  const auto& sj = s.json();
  s.set("harmonic", !sj.contains("tension_max") || sj.at("tension_max").get<double>() < kZeroThreshold);
  return {Json{{"points", rows}, {"summary", s.json()}}, 0};
}

Report bitension_cmd(const FrameModel& m) {
  Summary s;
  auto rows = per_point(m, s, [&](const Point& p, Json& r) {
    const auto d = data_at(m, p);
    const auto b = bitension_closed_form(d);
    const auto o = bitension_generic_oracle(d);
    const double tn = tension(d).norm();
    r["b1"] = b.b1;
    r["b2"] = b.b2;
    r["norm"] = b.norm();
    r["oracle_b1"] = o.b1;
    r["oracle_b2"] = o.b2;
    const double diff = std::max(std::abs(o.b1 - b.b1), std::abs(o.b2 - b.b2));
    r["oracle_diff"] = diff;
    r["tension_norm"] = tn;
    s.max_abs("bitension_max", b.norm());
    s.max_abs("tension_max", tn);
    s.min("tension_min", tn);
    s.max_abs("oracle_diff_max", diff);
  });
  const auto& sj = s.json();
  const bool ok = sj.contains("bitension_max");
  const bool bih = ok && sj.at("bitension_max").get<double>() < kConsistentThreshold;
  s.set("biharmonic", bih);
  s.set("proper_biharmonic", bih && sj.at("tension_max").get<double>() > kConsistentThreshold);
  return {Json{{"points", rows}, {"summary", s.json()}}, 0};
}

Report classify_cmd(const FrameModel& m, std::optional<double> c) {
  const auto input = prepare_space_form_input(m, c);
  const auto v = classify(input);
  Json j;
  j["c"] = input.c;
  j["rotated"] = input.rotated;
  j["verdict"] = to_json(v);
  j["eq19"] = to_json(eq19_check(input));
  return {j, v.kind == VerdictKind::InconsistentData ? 2 : 0};
}

}  // namespace

Report run(const std::string& command, const FrameModel* model, const RunOptions& options) {
  Report body;
  if (command == "scan") {
    body.json = to_json(scan(options.c_grid, make_family(options.family)));
  } else {
    if (!model) throw ModelError("command '" + command + "' needs a model (--model or --builtin)");
    if (command == "verify")
      body = verify(*model);
    else if (command == "connection")
      body = connection(*model);
    else if (command == "curvature")
      body = curvature(*model, options.c);
    else if (command == "tension")
      body = tension_cmd(*model);
    else if (command == "bitension")
      body = bitension_cmd(*model);
    else if (command == "classify")
      body = classify_cmd(*model, options.c);
    else
      throw ModelError("unknown command '" + command + "'");
  }
  Report out;
  out.exit_code = body.exit_code;
  out.json["schema_version"] = 1;
  out.json["command"] = command;
  if (model && command != "scan") out.json["model"] = model_header(*model);
  for (auto& [k, v] : body.json.items()) {
    if (k == "schema_version") continue;
    out.json[k] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(const Json& v) {
  if (v.is_number_float()) {
    char buf[64];
    const double x = v.get<double>();
    std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array() && v.size() == 3 && v[0].is_number())
    return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ")";
  return v.dump();
}

void render_object(std::ostringstream& out, const Json& obj, const std::string& indent) {
  for (const auto& [k, v] : obj.items()) {
    if (v.is_object()) {
      out << indent << k << ":\n";
      render_object(out, v, indent + "  ");
    } else {
      out << indent << k << ": " << fmt(v) << "\n";
    }
  }
}

void render_rows(std::ostringstream& out, const Json& rows) {
  // Columns: scalar fields that appear in any row, in first-seen order.
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.items())
      if ((v.is_primitive() || k == "point") && std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      line.push_back(r.contains(cols[c]) ? fmt(r.at(cols[c])) : "-");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << "  " << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size(), ' ');
    }
    out << "\n";
  };
  emit(cols);
  for (const auto& line : cells) emit(line);
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  out << "command: " << fmt(report.value("command", Json("?"))) << "\n";
  if (report.contains("model")) {
    const auto& m = report.at("model");
    out << "model: " << fmt(m.at("name")) << " (" << fmt(m.at("mode")) << ")";
    if (!m.at("constants").empty()) {
      out << "  constants:";
      for (const auto& [k, v] : m.at("constants").items()) out << " " << k << "=" << fmt(v);
    }
    out << "\n";
  }
  for (const auto& [k, v] : report.items()) {
    if (k == "schema_version" || k == "command" || k == "model" || k == "points" || k == "rows") continue;
    if (v.is_object()) {
      out << k << ":\n";
      render_object(out, v, "  ");
    } else {
      out << k << ": " << fmt(v) << "\n";
    }
  }
  if (report.contains("points") && !report.at("points").empty()) {
    out << "points:\n";
    render_rows(out, report.at("points"));
  }
  if (report.contains("rows") && !report.at("rows").empty()) {
    out << "rows:\n";
    render_rows(out, report.at("rows"));
  }
  return out.str();
}

}  // namespace bihar
