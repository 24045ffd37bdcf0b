#include "bihar/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "bihar/biharmonic.hpp"
#include "bihar/curvature.hpp"
#include "bihar/error.hpp"

namespace bihar {

SpaceFormInput prepare_space_form_input(const FrameModel& model, std::optional<double> c) {
  SpaceFormInput in;
  if (c)
    in.c = *c;
  else if (auto declared = model.curvature_constant())
    in.c = *declared;
  else
    throw PreconditionViolation("classification needs a space-form curvature: set space_form_c or pass --c");

  std::vector<IntegrabilityData> raw;
  for (const auto& p : model.chart.samples()) {
    auto d = data_at(model, p);
    const std::array<double, 5> v{d.f1.d1[kVertical], d.f2.d1[kVertical], d.k1.d1[kVertical], d.k2.d1[kVertical],
                                  d.sigma.d1[kVertical]};
    for (double x : v) in.vertical.max_abs = std::max(in.vertical.max_abs, std::abs(x));
    in.vertical.points.push_back(p);
    in.vertical.values.push_back(v);
    in.points.push_back(p);
    raw.push_back(std::move(d));
  }
  in.vertical.constant = in.vertical.max_abs < kVerticalTolerance;

  in.rotated = std::any_of(raw.begin(), raw.end(), [](const auto& d) { return std::abs(d.k2.value) > kVanishingK2; });
  for (auto& d : raw) {
    if (in.rotated) {
      auto r = rotate_frame(d);
      in.rotation_degenerate = in.rotation_degenerate || r.degenerate;
      in.samples.push_back(std::move(r.data));
    } else {
      in.samples.push_back(std::move(d));
    }
  }
  return in;
}

namespace {

Eq13Residuals residuals_unchecked(const IntegrabilityData& d, double c) {
  const double f1 = d.f1.value, f2 = d.f2.value, k1 = d.k1.value, s = d.sigma.value;
  Eq13Residuals r;
  r.a[0] = -d.sigma.d1[0] + 2.0 * k1 * s;
  r.a[1] = d.k1.d1[0] - s * s - k1 * k1 - c;
  r.a[2] = k1 * f1;
  r.a[3] = d.f1.d1[1] - d.f2.d1[0] + f1 * f1 + f2 * f2 - 3.0 * s * s + c;
  r.a[4] = d.sigma.d1[1];
  r.a[5] = d.k1.d1[1];
  r.a[6] = -s * s - k1 * f2 - c;
  return r;
}

std::string format_point(const Point& p) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", p[0], p[1], p[2]);
  return buf;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Maxima {
  double value = 0.0;
  std::size_t index = 0;
  void update(double v, std::size_t i) {
    if (std::abs(v) > value) {
      value = std::abs(v);
      index = i;
    }
  }
};

}  // namespace

Eq13Residuals eq13_residuals(const IntegrabilityData& d, double c) {
  if (std::abs(d.k2.value) >= kVanishingK2)
    throw PreconditionViolation("space-form residuals are stated for k2 = 0; rotate the frame first");
  return residuals_unchecked(d, c);
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Harmonic:
      return "Harmonic";
    case VerdictKind::NoBiharmonicPossible:
      return "NoBiharmonicPossible";
    case VerdictKind::InconsistentData:
      return "InconsistentData";
  }
  return "InconsistentData";
}

double Verdict::evidence_value(const std::string& name) const {
  for (const auto& [k, v] : evidence)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

Verdict classify(const SpaceFormInput& input) {
  Verdict v;
  const double c = input.c;
  const std::size_t n = input.samples.size();
  auto add = [&](const std::string& name, double value) {
    if (std::isfinite(value))
      v.evidence.emplace_back(name, value);
    else
      v.notes.push_back(name + " is not finite and was omitted");
  };

  std::array<Maxima, 7> a{};
  Maxima eq13, k1_max, k2_max, f1_max, f2_max, sigma_max, tension_max, bitension_max, T_max, A_max;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = input.samples[i];
    const auto r = residuals_unchecked(d, c);
    for (int j = 0; j < 7; ++j) {
      a[j].update(r.a[j], i);
      eq13.update(r.a[j], i);
    }
    k1_max.update(d.k1.value, i);
    k2_max.update(d.k2.value, i);
    f1_max.update(d.f1.value, i);
    f2_max.update(d.f2.value, i);
    sigma_max.update(d.sigma.value, i);
    tension_max.update(tension(d).norm(), i);
    if (d.k1.has_second() && d.k2.has_second()) bitension_max.update(bitension_closed_form(d).norm(), i);
    const auto o = oneill_tensors(d);
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int k = 0; k < 3; ++k) {
          T_max.update(o.T[p][q][k], i);
          A_max.update(o.A[p][q][k], i);
        }
  }

  for (int j = 0; j < 7; ++j) add(Eq13Residuals::names[j], a[j].value);
  add("eq13_max", eq13.value);
  add("k2_max", k2_max.value);
  add("tension_max", tension_max.value);
  add("bitension_max", bitension_max.value);
  add("vertical_derivative_max", input.vertical.max_abs);

  v.consistent = n > 0 && eq13.value <= kConsistentThreshold;
  v.fibers_totally_geodesic = T_max.value < kZeroThreshold;
  v.horizontal_integrable = A_max.value < kZeroThreshold;
  if (v.fibers_totally_geodesic && c < -kZeroThreshold)
    v.base_identification = "CH1(4c)";
  else if (v.fibers_totally_geodesic && v.horizontal_integrable && std::abs(c) <= kZeroThreshold)
    v.base_identification = "E2-product";

  if (input.rotated) v.notes.push_back("frame rotated so that k2 = 0 before evaluating the constraints");
  if (input.rotation_degenerate) v.notes.push_back("rotation undefined where k1 = k2 = 0; frame kept there");
  if (!input.vertical.constant) v.notes.push_back("data are not constant along the fibres");

  if (n == 0) {
    v.kind = VerdictKind::InconsistentData;
    v.case_taken = "inconsistent";
    v.reason = "no sample points";
    return v;
  }

  if (c > kZeroThreshold) {
    v.kind = VerdictKind::NoBiharmonicPossible;
    v.case_taken = "positive-c";
    add("sigma_squared_required", -c);
    v.reason = "c > 0: harmonicity would need sigma^2 = -c < 0, and every non-harmonic branch is contradictory";
    if (!v.consistent)
      v.notes.push_back("the supplied data do not satisfy the space-form constraints (eq13_max " +
                        format_number(eq13.value) + "); the verdict rests on c alone");
    return v;
  }

  if (eq13.value > kConsistentThreshold) {
    v.kind = VerdictKind::InconsistentData;
    v.case_taken = "inconsistent";
    int worst = 0;
    for (int j = 1; j < 7; ++j)
      if (a[j].value > a[worst].value) worst = j;
    v.indeterminate = eq13.value <= kViolatedThreshold;
    v.reason = std::string(v.indeterminate ? "indeterminate: " : "") + "space-form constraint " +
               Eq13Residuals::names[worst] + " violated by " + format_number(a[worst].value) + " at " +
               format_point(input.points[a[worst].index]);
    add("worst_point_index", static_cast<double>(a[worst].index));
    return v;
  }

  if (k1_max.value < kZeroThreshold) {
    v.kind = VerdictKind::Harmonic;
    v.case_taken = "harmonic";
    v.reason = "k1 vanishes, so the tension field vanishes and the fibres are minimal";
    Maxima sc;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = input.samples[i].sigma.value;
      sc.update(s * s + c, i);
    }
    add("sigma_squared_plus_c", sc.value);
    return v;
  }

  v.kind = VerdictKind::NoBiharmonicPossible;
  if (f2_max.value < kZeroThreshold) {
    v.case_taken = "case-I";
    Maxima sc, three_sc, lap, cube, r1, r2;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = input.samples[i];
      const double s2 = d.sigma.value * d.sigma.value;
      sc.update(s2 + c, i);
      three_sc.update(3.0 * s2 - c, i);
      cube.update(d.k1.value * d.k1.value * d.k1.value, i);
      if (d.k1.has_second()) {
        lap.update(frame_laplacian(d.k1, d), i);
        if (std::abs(d.k2.value) < kVanishingK2) {
          const auto rr = reduced_residual(d);
          r1.update(rr.r1, i);
          r2.update(rr.r2, i);
        }
      }
    }
    add("sigma_squared_plus_c", sc.value);
    add("three_sigma_squared_minus_c", three_sc.value);
    add("laplacian_k1", lap.value);
    add("k1_cubed", cube.value);
    add("reduced_r1", r1.value);
    add("reduced_r2", r2.value);
    v.reason = "f1 = f2 = 0 with k1 != 0: a4 and a7 force sigma = c = 0, and biharmonicity would force k1^3 = 0";
    v.notes.push_back("case I uses exactly the pair a4, a7 to conclude sigma = c = 0");
  } else {
    v.case_taken = "case-II";
    Maxima e16, e17, e18;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = input.samples[i];
      const double k2 = d.k1.value * d.k1.value, s2 = d.sigma.value * d.sigma.value;
      e16.update(k2 + 3.0 * s2 + 3.0 * c, i);
      e17.update(k2 + 7.0 * s2 + c, i);
      e18.update(k2 + 15.0 * s2 + c, i);
    }
    add("k1sq_plus_3sigmasq_plus_3c", e16.value);
    add("k1sq_plus_7sigmasq_plus_c", e17.value);
    add("k1sq_plus_15sigmasq_plus_c", e18.value);
    v.reason =
        "f1 = 0, f2 != 0 with k1 != 0: biharmonicity would make all three chain expressions vanish, forcing "
        "k1 = sigma = c = 0";
  }
  if (bitension_max.value < kConsistentThreshold && tension_max.value > 1e-3)
    v.notes.push_back("numerical bitension vanishes on the samples although the data are not harmonic");
  return v;
}

Json to_json(const Verdict& v) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(v.kind);
  j["case"] = v.case_taken;
  j["reason"] = v.reason;
  j["consistent"] = v.consistent;
  j["indeterminate"] = v.indeterminate;
  j["flags"] = {{"fibers_totally_geodesic", v.fibers_totally_geodesic},
                {"horizontal_integrable", v.horizontal_integrable},
                {"base_identification", v.base_identification}};
  Json ev = Json::object();
  for (const auto& [k, val] : v.evidence) ev[k] = val;
  j["evidence"] = ev;
  j["notes"] = v.notes;
  return j;
}

Eq19Report eq19_check(const SpaceFormInput& input) {
  Eq19Report r;
  const double c = input.c;
  double kmax = 0.0;
  for (const auto& d : input.samples) {
    kmax = std::max({kmax, std::abs(d.k1.value), std::abs(d.k2.value)});
    const double f1 = d.f1.value, f2 = d.f2.value, s = d.sigma.value;
    r.b1 = std::max(r.b1, std::abs(d.sigma.d1[0]));
    r.b2 = std::max(r.b2, std::abs(s * s + c));
    r.b3 = std::max(r.b3, std::abs(d.f1.d1[1] - d.f2.d1[0] + f1 * f1 + f2 * f2 + 4.0 * c));
    r.b4 = std::max(r.b4, std::abs(d.sigma.d1[1]));
  }
  r.precondition_met = !input.samples.empty() && kmax < kZeroThreshold;
  r.c_nonpositive = c <= kZeroThreshold;
  r.sigma_forced_zero = std::abs(c) <= kZeroThreshold;
  r.satisfied = r.precondition_met && r.c_nonpositive && std::max({r.b1, r.b2, r.b3, r.b4}) <= kConsistentThreshold;
  return r;
}

Json to_json(const Eq19Report& r) {
  Json j;
  j["precondition_met"] = r.precondition_met;
  j["b1"] = r.b1;
  j["b2"] = r.b2;
  j["b3"] = r.b3;
  j["b4"] = r.b4;
  j["c_nonpositive"] = r.c_nonpositive;
  j["sigma_forced_zero"] = r.sigma_forced_zero;
  j["satisfied"] = r.satisfied;
  return j;
}

// ---------------------------------------------------------------------------
// Families

FrameModel data_model(const std::string& name, const std::array<Interval, 3>& domain, std::array<int, 3> grid,
                      const std::array<std::string, 5>& data, double c) {
  const std::array<std::string, 3> coords{"x", "y", "z"};
  const std::set<std::string, std::less<>> names{"c"};
  DataMode dm{parse(data[0], coords, names), parse(data[1], coords, names), parse(data[2], coords, names),
              parse(data[3], coords, names), parse(data[4], coords, names)};
  FrameModel m{name, Chart::with_grid(coords, domain, grid), Constants{{"c", c}}, std::move(dm), Expr::constant("c")};
  validate_structure(m);
  return m;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.17g)", v);
  return buf;
}

// Solutions of k1' = c + k1^2 with f2 = -c/k1, written in coordinates rotated
// by alpha so that the frame sees both k1 and k2. Consistent for every c.
FrameModel riccati_model(double c, double alpha, double shift) {
  const double s = std::abs(c) > 1e-12 ? std::sqrt(std::abs(c)) : 1.0;
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const std::string u = "(" + num(ca) + "*x+" + num(sa) + "*y-" + num(-(0.75 + shift) / s) + ")";
  std::string K, F;
  if (c > 1e-12) {
    K = num(s) + "*sin(" + num(s) + "*" + u + ")/cos(" + num(s) + "*" + u + ")";
    F = "(-c)/(" + K + ")";
  } else if (c < -1e-12) {
    K = "-" + num(s) + "*tanh(" + num(s) + "*" + u + ")";
    F = "(-c)/(" + K + ")";
  } else {
    K = "-1/" + u;
    F = "0";
  }
  const double w = 0.45 / (s * std::sqrt(2.0));
  const std::array<Interval, 3> domain{Interval{-w, w}, Interval{-w, w}, Interval{-1.0, 1.0}};
  const std::array<std::string, 5> data{"-" + num(sa) + "*" + F, num(ca) + "*" + F, num(ca) + "*" + K,
                                        num(sa) + "*" + K, "0"};
  return data_model("riccati", domain, {3, 3, 3}, data, c);
}

const std::array<Interval, 3> kUnitBox{Interval{-1.0, 1.0}, Interval{-1.0, 1.0}, Interval{-1.0, 1.0}};

FrameModel random_model(double c, double parameter) {
  const auto seed = static_cast<std::uint64_t>(std::llround(parameter)) * 0x9E3779B97F4A7C15ull ^
                    std::bit_cast<std::uint64_t>(c);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  switch (std::llround(parameter) % 4) {
    case 0:
      return riccati_model(c, 3.14159 * U(rng), 0.1 * U(rng));
    case 1: {
      std::array<std::string, 5> data;
      for (auto& d : data) d = num(2.0 * U(rng));
      return data_model("random-constant", kUnitBox, {3, 3, 3}, data, c);
    }
    case 2: {
      std::array<std::string, 5> data;
      for (auto& d : data)
        d = num(U(rng)) + "*sin(" + num(U(rng)) + "*x+" + num(U(rng)) + "*y)+" + num(U(rng)) + "*x*y+" +
            num(U(rng)) + "*x^2+" + num(U(rng));
      return data_model("random-smooth", kUnitBox, {3, 3, 3}, data, c);
    }
    default: {
      // A consistent solution with a small smooth perturbation of k1.
      auto m = riccati_model(c, 3.14159 * U(rng), 0.1 * U(rng));
      auto& dm = std::get<DataMode>(m.mode);
      const double eps = std::pow(10.0, -7.0 + 4.0 * (U(rng) + 1.0) / 2.0);
      const std::array<std::string, 3> coords{"x", "y", "z"};
      dm.k1 = Expr::binary(BinaryOp::Add, dm.k1, parse(num(eps) + "*sin(x+2*y)", coords));
      m.name = "riccati-perturbed";
      return m;
    }
  }
}

}  // namespace

std::vector<std::string> family_names() { return {"constant", "riccati", "zero", "random"}; }

DataFamily make_family(const std::string& name) {
  if (name == "constant")
    return {name, {0.0, 0.5, 1.0, 2.0}, [](double c, double p) {
              return data_model("constant", kUnitBox, {3, 3, 3},
                                {"0", num(p / 2.0), num(p), "0", num(p / 4.0)}, c);
            }};
  if (name == "riccati")
    return {name, {0.0, 0.4, 1.2, 2.5}, [](double c, double p) { return riccati_model(c, p, 0.0); }};
  if (name == "zero")
    return {name, {0.0}, [](double c, double) { return data_model("zero", kUnitBox, {3, 3, 3}, {"0", "0", "0", "0", "0"}, c); }};
  if (name == "random") {
    std::vector<double> seeds(100);
    for (int i = 0; i < 100; ++i) seeds[i] = i;
    return {name, seeds, random_model};
  }
  throw ModelError("unknown data family '" + name + "'");
}

bool ScanRow::proper_biharmonic_witness() const {
  return verdict && error.empty() && eq13_max < kConsistentThreshold && bitension_max < kConsistentThreshold &&
         tension_max > 1e-3;
}

std::size_t ScanTable::witnesses() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return r.proper_biharmonic_witness(); }));
}

ScanTable scan(const std::vector<double>& c_grid, const DataFamily& family) {
  ScanTable t;
  t.family = family.name;
  for (double c : c_grid)
    for (double p : family.parameters) {
      ScanRow row;
      row.c = c;
      row.parameter = p;
      try {
        const auto input = prepare_space_form_input(family.make(c, p), c);
        const auto v = classify(input);
        row.verdict = v.kind;
        row.eq13_max = v.evidence_value("eq13_max");
        row.tension_max = v.evidence_value("tension_max");
        row.bitension_max = v.evidence_value("bitension_max");
      } catch (const Error& e) {
        row.error = e.what();
      }
      t.rows.push_back(std::move(row));
    }
  return t;
}

Json to_json(const ScanTable& t) {
  Json j;
  j["schema_version"] = 1;
  j["family"] = t.family;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["c"] = r.c;
    row["parameter"] = r.parameter;
    if (r.verdict) {
      row["verdict"] = to_string(*r.verdict);
      row["eq13_max"] = r.eq13_max;
      row["tension_max"] = r.tension_max;
      row["bitension_max"] = r.bitension_max;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["cells"] = t.rows.size();
  j["proper_biharmonic_witnesses"] = t.witnesses();
  return j;
}

}  // namespace bihar
