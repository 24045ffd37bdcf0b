#include "bihar/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "bihar/error.hpp"

namespace bihar {

Mat3 frame_metric() {
  Mat3 g{};
  for (int i = 0; i < 3; ++i) g[i][i] = kSignature[i];
  return g;
}

Chart::Chart(std::array<std::string, 3> coords, std::array<Interval, 3> domain, std::vector<Point> samples)
    : coords_(std::move(coords)), domain_(domain), samples_(std::move(samples)) {
  for (int a = 0; a < 3; ++a) {
    if (coords_[a].empty()) throw ModelError("chart coordinate names must be non-empty");
    for (int b = 0; b < a; ++b)
      if (coords_[a] == coords_[b]) throw ModelError("duplicate chart coordinate '" + coords_[a] + "'");
    if (!(domain_[a].lo < domain_[a].hi))
      throw ModelError("degenerate domain interval for coordinate '" + coords_[a] + "'");
  }
  for (const auto& p : samples_)
    if (!interior(p)) throw ModelError("sample point is not strictly inside the chart domain");
}

Chart Chart::with_grid(std::array<std::string, 3> coords, std::array<Interval, 3> domain, std::array<int, 3> n) {
  for (int a = 0; a < 3; ++a)
    if (n[a] < 1) throw ModelError("grid sizes must be positive");
  std::vector<Point> samples;
  samples.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  auto node = [&](int axis, int i) {
    const auto& iv = domain[axis];
    return iv.lo + (iv.hi - iv.lo) * (i + 1) / (n[axis] + 1);
  };
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j)
      for (int k = 0; k < n[2]; ++k) samples.push_back({node(0, i), node(1, j), node(2, k)});
  return Chart(std::move(coords), domain, std::move(samples));
}

bool Chart::interior(const Point& p) const {
  for (int a = 0; a < 3; ++a)
    if (!(p[a] > domain_[a].lo && p[a] < domain_[a].hi)) return false;
  return true;
}

const ChartMode& FrameModel::chart_mode() const {
  if (const auto* c = std::get_if<ChartMode>(&mode)) return *c;
  throw ModeUnsupported("model '" + name + "' is in data mode; a chart-mode model is required");
}

const DataMode& FrameModel::data_mode() const {
  if (const auto* d = std::get_if<DataMode>(&mode)) return *d;
  throw ModeUnsupported("model '" + name + "' is in chart mode; a data-mode model is required");
}

std::optional<double> FrameModel::curvature_constant() const {
  if (!space_form_c) return std::nullopt;
  return eval_value(*space_form_c, Point{0.0, 0.0, 0.0}, constants);
}

namespace {

void check_symbols(const Expr& e, const FrameModel& m, const char* what) {
  for (const auto& name : e.constant_names())
    if (!m.constants.count(name))
      throw ModelError(std::string(what) + " references undeclared constant '" + name + "'");
}

}  // namespace

void validate_structure(const FrameModel& model) {
  if (model.space_form_c) {
    check_symbols(*model.space_form_c, model, "space_form_c");
    if (!model.space_form_c->coordinate_axes().empty())
      throw ModelError("space_form_c must not depend on coordinates");
  }
  if (const auto* cm = std::get_if<ChartMode>(&model.mode)) {
    for (const auto& field : cm->frame)
      for (const auto& c : field.coeffs) check_symbols(c, model, "frame");
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        check_symbols(cm->metric[a][b], model, "metric");
        if (!(cm->metric[a][b] == cm->metric[b][a])) throw ModelError("metric must be symmetric");
      }
  } else {
    const auto& dm = std::get<DataMode>(model.mode);
    const std::array<std::pair<const char*, const Expr*>, 5> data{{
        {"f1", &dm.f1}, {"f2", &dm.f2}, {"k1", &dm.k1}, {"k2", &dm.k2}, {"sigma", &dm.sigma}}};
    for (const auto& [name, e] : data) {
      check_symbols(*e, model, name);
      if (model.space_form_c && e->depends_on_axis(kVertical))
        throw ModelError(std::string("datum ") + name +
                         " depends on the vertical coordinate, which a space-form model forbids");
    }
  }
}

// ---------------------------------------------------------------------------

FrameScalar FrameScalar::constant(double v) {
  FrameScalar s;
  s.value = v;
  s.d2 = Mat3{};
  return s;
}

const Mat3& FrameScalar::second() const {
  if (!d2) throw PreconditionViolation("second frame derivatives are not available for this quantity");
  return *d2;
}

FrameScalar FrameScalar::derivative(int i) const {
  FrameScalar s;
  s.value = d1[i];
  if (d2)
    for (int j = 0; j < 3; ++j) s.d1[j] = (*d2)[j][i];
  else
    s.d1 = {NAN, NAN, NAN};
  return s;
}

namespace {

std::optional<Mat3> combine2(const FrameScalar& a, const FrameScalar& b, auto&& f) {
  if (!a.d2 || !b.d2) return std::nullopt;
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = f(i, j);
  return out;
}

}  // namespace

FrameScalar operator+(const FrameScalar& a, const FrameScalar& b) {
  FrameScalar s;
  s.value = a.value + b.value;
  for (int i = 0; i < 3; ++i) s.d1[i] = a.d1[i] + b.d1[i];
  s.d2 = combine2(a, b, [&](int i, int j) { return (*a.d2)[i][j] + (*b.d2)[i][j]; });
  return s;
}

FrameScalar operator-(const FrameScalar& a) {
  FrameScalar s;
  s.value = -a.value;
  for (int i = 0; i < 3; ++i) s.d1[i] = -a.d1[i];
  if (a.d2) {
    Mat3 m = *a.d2;
    for (auto& row : m)
      for (auto& v : row) v = -v;
    s.d2 = m;
  }
  return s;
}

FrameScalar operator-(const FrameScalar& a, const FrameScalar& b) { return a + (-b); }

FrameScalar operator*(const FrameScalar& a, const FrameScalar& b) {
  FrameScalar s;
  s.value = a.value * b.value;
  for (int i = 0; i < 3; ++i) s.d1[i] = a.d1[i] * b.value + a.value * b.d1[i];
  // e_i e_j (ab) = (e_i e_j a) b + e_j a e_i b + e_i a e_j b + a e_i e_j b
  s.d2 = combine2(a, b, [&](int i, int j) {
    return (*a.d2)[i][j] * b.value + a.d1[j] * b.d1[i] + a.d1[i] * b.d1[j] + a.value * (*b.d2)[i][j];
  });
  return s;
}

FrameScalar operator*(double k, const FrameScalar& a) { return FrameScalar::constant(k) * a; }

FrameScalar apply(const FrameScalar& u, double g, double dg, double ddg) {
  FrameScalar s;
  s.value = g;
  for (int i = 0; i < 3; ++i) s.d1[i] = dg * u.d1[i];
  if (u.d2) {
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = ddg * u.d1[i] * u.d1[j] + dg * (*u.d2)[i][j];
    s.d2 = m;
  }
  return s;
}

FrameScalar operator/(const FrameScalar& a, const FrameScalar& b) {
  const double v = b.value;
  return a * apply(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

// ---------------------------------------------------------------------------

double directional_derivative(const VectorField& X, const Expr& f, const Point& p, const Constants& constants) {
  const auto fj = evaluate<1>(f, p, constants);
  double s = 0.0;
  for (int a = 0; a < 3; ++a) s += eval_value(X.coeffs[a], p, constants) * fj.grad(a);
  return s;
}

ScalarJet1 directional_derivative_jet(const VectorField& X, const Expr& f, const Point& p,
                                      const Constants& constants) {
  const auto fj = evaluate<2>(f, p, constants);
  JetVec<2> xj;
  for (int a = 0; a < 3; ++a) xj[a] = evaluate<2>(X.coeffs[a], p, constants);
  return apply_field(xj, fj);
}

Vec3 lie_bracket(const VectorField& X, const VectorField& Y, const Point& p, const Constants& constants) {
  JetVec<1> xj, yj;
  for (int a = 0; a < 3; ++a) {
    xj[a] = evaluate<1>(X.coeffs[a], p, constants);
    yj[a] = evaluate<1>(Y.coeffs[a], p, constants);
  }
  const auto b = bracket(xj, yj);
  return {b[0].value(), b[1].value(), b[2].value()};
}

Mat3 metric_at(const FrameModel& model, const Point& p) {
  if (!model.is_chart()) return frame_metric();
  const auto& cm = model.chart_mode();
  Mat3 g{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] = eval_value(cm.metric[a][b], p, model.constants);
  return g;
}

Mat3 frame_gram(const FrameModel& model, const Point& p) {
  const auto jets = frame_jets<0>(model, p);
  Mat3 gram{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram[i][j] = inner(jets.metric, jets.frame[i], jets.frame[j]).value();
  return gram;
}

double orthonormality_defect(const FrameModel& model) {
  if (!model.is_chart()) return 0.0;
  const Mat3 eta = frame_metric();
  double worst = 0.0;
  for (const auto& p : model.chart.samples()) {
    const Mat3 gram = frame_gram(model, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(gram[i][j] - eta[i][j]));
  }
  return worst;
}

}  // namespace bihar
