#include "fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "bihar/error.hpp"
#include "bihar/model_io.hpp"

namespace bihar::fixtures {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string literal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  return v < 0 ? "(" + s + ")" : s;
}

std::string random_poly(Rng& rng, double scale) {
  static const char* monomials[] = {"", "*x", "*y", "*x*y", "*x^2", "*y^2"};
  std::string s = "(";
  for (int i = 0; i < 6; ++i) {
    if (i) s += " + ";
    s += literal(uniform(rng, -scale, scale)) + monomials[i];
  }
  return s + ")";
}

Json synthetic_chart_json(Rng& rng, const SyntheticOptions& options) {
  const std::string p = random_poly(rng, 0.3);
  std::string t = random_poly(rng, 0.8);
  std::string q = random_poly(rng, 0.3);
  const std::string w1 = random_poly(rng, 0.5), v1 = random_poly(rng, 0.5);
  const std::string w2 = random_poly(rng, 0.5), v2 = random_poly(rng, 0.5);
  if (options.vertical_beta) q = "(" + q + " + z*" + random_poly(rng, 0.3) + ")";
  if (options.twist) t = "(" + t + " + " + literal(uniform(rng, 0.4, 0.8)) + "*z)";

  const std::string l = "exp(" + p + ")";
  const std::string b = "exp(" + q + ")";
  const std::string cs = "cos(" + t + ")", sn = "sin(" + t + ")";
  const std::string h1 = "(z*" + w1 + " + " + v1 + ")";
  const std::string h2 = "(z*" + w2 + " + " + v2 + ")";
  const std::string u = "((" + h1 + "*" + cs + " - " + h2 + "*" + sn + ")/" + l + ")";
  const std::string v = "((" + h1 + "*" + sn + " + " + h2 + "*" + cs + ")/" + l + ")";
  const std::string b2 = b + "^2";

  const std::string gxy = "-" + u + "*" + v + "/" + b2;
  const std::string gxz = u + "/" + b2;
  const std::string gyz = v + "/" + b2;

  Json doc;
  doc["schema_version"] = 1;
  doc["name"] = "synthetic";
  doc["mode"] = "chart";
  doc["chart"] = {{"coords", {"x", "y", "z"}},
                  {"domain", {{-1, 1}, {-1, 1}, {-1, 1}}},
                  {"grid", {options.grid[0], options.grid[1], options.grid[2]}}};
  doc["constants"] = Json::object();
  doc["frame"] = {{l + "*" + cs, l + "*" + sn, h1}, {"-" + l + "*" + sn, l + "*" + cs, h2}, {"0", "0", b}};
  doc["metric"] = {{l + "^(-2) - " + u + "^2/" + b2, gxy, gxz},
                   {gxy, l + "^(-2) - " + v + "^2/" + b2, gyz},
                   {gxz, gyz, "-1/" + b2}};
  return doc;
}

FrameModel synthetic_chart(Rng& rng, const SyntheticOptions& options) {
  return model_from_json(synthetic_chart_json(rng, options));
}

std::string random_smooth(Rng& rng) {
  auto r = [&](double s) { return literal(uniform(rng, -s, s)); };
  return r(1.0) + " + " + r(0.8) + "*sin(" + r(1.2) + "*x + " + r(1.2) + "*y + " + r(1.2) + "*z)" + " + " +
         r(0.5) + "*x*y + " + r(0.4) + "*exp(" + r(0.6) + "*z)*cos(" + r(1.0) + "*y)" + " + " + r(0.5) +
         "*tanh(" + r(1.0) + "*x - " + r(1.0) + "*z) + " + r(0.3) + "*z^2";
}

FrameModel random_data_model(Rng& rng, std::array<int, 3> grid) {
  Json doc;
  doc["schema_version"] = 1;
  doc["name"] = "random-data";
  doc["mode"] = "data";
  doc["chart"] = {{"coords", {"x", "y", "z"}},
                  {"domain", {{-1, 1}, {-1, 1}, {-1, 1}}},
                  {"grid", {grid[0], grid[1], grid[2]}}};
  doc["data"] = {{"f1", random_smooth(rng)},
                 {"f2", random_smooth(rng)},
                 {"k1", random_smooth(rng)},
                 {"k2", random_smooth(rng)},
                 {"sigma", random_smooth(rng)}};
  return model_from_json(doc);
}

FrameModel example1(double c, Interval x, int n) {
  Json doc = builtin_model("example1");
  doc["chart"]["domain"][0] = {x.lo, x.hi};
  doc["chart"]["grid"] = {n, 1, 1};
  return model_from_json(doc, {{"c", c}});
}

double phi(double c, double x) {
  const double e = std::exp(c * x);
  return c * (1 + e) / (1 - e);
}

double phi_prime(double c, double x) {
  const double e = std::exp(c * x);
  return 2 * c * c * e / ((1 - e) * (1 - e));
}

double phi_second(double c, double x) {
  const double e = std::exp(c * x);
  return 2 * c * c * c * e * (1 + e) / std::pow(1 - e, 3);
}

FrameModel constant_data(double f1, double f2, double k1, double k2, double sigma, std::optional<double> c) {
  Json doc;
  doc["schema_version"] = 1;
  doc["name"] = "constants";
  doc["mode"] = "data";
  doc["chart"] = {{"coords", {"x", "y", "z"}}, {"domain", {{-1, 1}, {-1, 1}, {-1, 1}}}};
  doc["constants"] = {{"F1", f1}, {"F2", f2}, {"K1", k1}, {"K2", k2}, {"S", sigma}};
  doc["data"] = {{"f1", "F1"}, {"f2", "F2"}, {"k1", "K1"}, {"k2", "K2"}, {"sigma", "S"}};
  if (c) doc["space_form_c"] = *c;
  return model_from_json(doc);
}

namespace {

Json chart_doc(const std::string& name, Json frame, Json metric, Json constants) {
  Json doc;
  doc["schema_version"] = 1;
  doc["name"] = name;
  doc["mode"] = "chart";
  doc["chart"] = {{"coords", {"x", "y", "z"}}, {"domain", {{-1, 1}, {-1, 1}, {-1, 1}}}};
  doc["constants"] = std::move(constants);
  doc["frame"] = std::move(frame);
  doc["metric"] = std::move(metric);
  return doc;
}

}  // namespace

FrameModel exponential_chart(double F, double K) {
  return model_from_json(chart_doc("exponential",
                                   {{"1", "0", "0"}, {"0", "exp(F*x)", "0"}, {"0", "0", "exp(K*x)"}},
                                   {{"1", "0", "0"}, {"0", "exp(-2*F*x)", "0"}, {"0", "0", "-exp(-2*K*x)"}},
                                   {{"F", F}, {"K", K}}));
}

FrameModel heisenberg_chart(double s) {
  return model_from_json(chart_doc("heisenberg", {{"1", "0", "0"}, {"0", "1", "-2*s*x"}, {"0", "0", "1"}},
                                   {{"1", "0", "0"}, {"0", "1 - 4*s^2*x^2", "-2*s*x"}, {"0", "-2*s*x", "-1"}},
                                   {{"s", s}}));
}

// ---------------------------------------------------------------------------

double central_difference(const ScalarFn& f, const Point& p, int axis, double h) {
  Point a = p, b = p;
  a[axis] += h;
  b[axis] -= h;
  return (f(a) - f(b)) / (2 * h);
}

double second_difference(const ScalarFn& f, const Point& p, int a, int b, double h) {
  auto shifted = [&](double da, double db) {
    Point q = p;
    q[a] += da;
    q[b] += db;
    return f(q);
  };
  if (a == b) return (shifted(h, 0) - 2 * f(p) + shifted(-h, 0)) / (h * h);
  return (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
}

FdExcess fd_excess(const Expr& e, const Point& p, const Constants& constants) {
  const auto jet = eval_jet(e, p, constants);
  const ScalarFn f = [&](const Point& q) { return eval_value(e, q, constants); };
  FdExcess out;
  for (int a = 0; a < 3; ++a) {
    const double g = jet.grad(a);
    const double err = std::abs(g - central_difference(f, p, a, 1e-5));
    out.grad = std::max(out.grad, err / std::max(1e-6, 1e-6 * std::abs(g)));
    for (int b = 0; b < 3; ++b) {
      const double hs = jet.hess(a, b);
      const double herr = std::abs(hs - second_difference(f, p, a, b, 1e-4));
      out.hess = std::max(out.hess, herr / std::max(1e-4, 1e-4 * std::abs(hs)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ExprGenerator::ExprGenerator(Rng& rng, std::vector<Point> probes, Constants constants)
    : rng_(rng), probes_(std::move(probes)), constants_(std::move(constants)) {}

SymbolTable ExprGenerator::symbols() {
  SymbolTable s;
  s.constants = {"a", "b"};
  return s;
}

ExprGenerator::Range ExprGenerator::range(const Expr& e) const {
  Range r{std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity(), true};
  try {
    for (const auto& p : probes_) {
      // Probe a small cube around the point so the finite-difference
      // stencils stay inside the region that was vetted.
      for (int corner = 0; corner < 9; ++corner) {
        Point q = p;
        if (corner > 0)
          for (int a = 0; a < 3; ++a) q[a] += ((corner - 1) >> a & 1 ? 1e-3 : -1e-3);
        const double v = eval_value(e, q, constants_);
        if (!std::isfinite(v)) return {0, 0, 0, false};
        r.min_abs = std::min(r.min_abs, std::abs(v));
        r.max_abs = std::max(r.max_abs, std::abs(v));
        r.min = std::min(r.min, v);
      }
    }
  } catch (const DomainError&) {
    r.ok = false;
  }
  return r;
}

Expr ExprGenerator::leaf() {
  std::uniform_int_distribution<int> pick(0, 9);
  const int k = pick(rng_);
  if (k < 5) {
    static const char* names[] = {"x", "y", "z"};
    const int axis = k % 3;
    return Expr::coordinate(axis, names[axis]);
  }
  if (k < 7) return Expr::constant(k == 5 ? "a" : "b");
  if (k == 7) return Expr::number(std::uniform_int_distribution<int>(0, 5)(rng_));
  return Expr::number(uniform(rng_, 0.0, 3.0));
}

std::optional<Expr> ExprGenerator::candidate(int depth) {
  std::uniform_int_distribution<int> pick(0, 12);
  auto sub = [&] { return generate(depth - 1); };
  const int k = pick(rng_);
  Expr e;
  switch (k) {
    case 0:
    case 1: e = Expr::binary(BinaryOp::Add, sub(), sub()); break;
    case 2: e = Expr::binary(BinaryOp::Sub, sub(), sub()); break;
    case 3:
    case 4: e = Expr::binary(BinaryOp::Mul, sub(), sub()); break;
    case 5: {
      const Expr den = sub();
      if (range(den).min_abs < 0.3) return std::nullopt;
      e = Expr::binary(BinaryOp::Div, sub(), den);
      break;
    }
    case 6: e = Expr::negate(sub()); break;
    case 7: {
      const int n = std::uniform_int_distribution<int>(-3, 4)(rng_);
      const Expr base = sub();
      if (n < 0 && range(base).min_abs < 0.3) return std::nullopt;
      e = Expr::power(base, n);
      break;
    }
    default: {
      static const Function fns[] = {Function::Exp,  Function::Log,  Function::Sin,  Function::Cos,
                                     Function::Sinh, Function::Cosh, Function::Tanh, Function::Sqrt};
      const Function fn = fns[std::uniform_int_distribution<int>(0, 7)(rng_)];
      const Expr arg = sub();
      const Range r = range(arg);
      if (!r.ok) return std::nullopt;
      if ((fn == Function::Log || fn == Function::Sqrt) && r.min < 0.3) return std::nullopt;
      if (fn != Function::Log && fn != Function::Sqrt && r.max_abs > 3.0) return std::nullopt;
      e = Expr::call(fn, arg);
      break;
    }
  }
  const Range r = range(e);
  if (!r.ok || r.max_abs > 50.0) return std::nullopt;
  return e;
}

Expr ExprGenerator::generate(int depth) {
  if (depth <= 0 || std::uniform_real_distribution<double>(0, 1)(rng_) < 0.2) return leaf();
  for (int attempt = 0; attempt < 20; ++attempt)
    if (auto e = candidate(depth)) return *e;
  return leaf();
}

std::vector<Point> random_points(Rng& rng, int n, double r) {
  std::vector<Point> pts(n);
  for (auto& p : pts)
    for (auto& v : p) v = uniform(rng, -r, r);
  return pts;
}

}  // namespace bihar::fixtures
