#include "bihar/submersion.hpp"

#include <algorithm>
#include <cmath>

#include "bihar/error.hpp"

namespace bihar {

bool IntegrabilityData::has_second() const {
  return f1.has_second() && f2.has_second() && k1.has_second() && k2.has_second() && sigma.has_second();
}

double IntegrabilityData::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, std::abs(r));
  return m;
}

namespace {

template <int N>
struct ExtractedJets {
  Jet<N - 1> f1, f2, k1, k2, sigma;
  std::array<double, 4> horizontal{};
};

// frame[i] are the coordinate components of e_i, metric the coordinate metric.
template <int N>
ExtractedJets<N> extract_jets(const JetMat<N>& frame, const JetMat<N>& metric) {
  JetMat<N - 1> g;
  JetMat<N - 1> e;
  for (int a = 0; a < 3; ++a) {
    g[a] = truncate_vec<N - 1>(metric[a]);
    e[a] = truncate_vec<N - 1>(frame[a]);
  }
  const auto b12 = bracket<N>(frame[0], frame[1]);
  const auto b13 = bracket<N>(frame[0], frame[2]);
  const auto b23 = bracket<N>(frame[1], frame[2]);

  ExtractedJets<N> out;
  out.f1 = inner(g, b12, e[0]);
  out.f2 = inner(g, b12, e[1]);
  out.sigma = inner(g, b12, e[2]) * 0.5;
  out.k1 = -inner(g, b13, e[2]);
  out.k2 = -inner(g, b23, e[2]);
  out.horizontal = {inner(g, b13, e[0]).value(), inner(g, b13, e[1]).value(), inner(g, b23, e[0]).value(),
                    inner(g, b23, e[1]).value()};
  return out;
}

template <int N>
double gram_defect(const JetMat<N>& frame, const JetMat<N>& metric) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v += metric[a][b].value() * frame[i][a].value() * frame[j][b].value();
      const double target = i == j ? kSignature[i] : 0.0;
      worst = std::max(worst, std::abs(v - target));
    }
  return worst;
}

template <int N>
IntegrabilityData assemble(const ExtractedJets<N>& x, const JetMat<N>& frame, double defect) {
  IntegrabilityData d;
  d.provenance = Provenance::Extracted;
  d.f1 = to_frame_scalar<N - 1, N>(x.f1, frame);
  d.f2 = to_frame_scalar<N - 1, N>(x.f2, frame);
  d.k1 = to_frame_scalar<N - 1, N>(x.k1, frame);
  d.k2 = to_frame_scalar<N - 1, N>(x.k2, frame);
  d.sigma = to_frame_scalar<N - 1, N>(x.sigma, frame);
  d.residuals = {x.horizontal[0], x.horizontal[1], x.horizontal[2], x.horizontal[3], defect};
  if (d.max_residual() > kAdaptedTolerance)
    throw NotAdaptedFrame("frame is not an adapted orthonormal frame (residual " + std::to_string(d.max_residual()) +
                              ")",
                          d.max_residual());
  return d;
}

FrameScalar declared(const Expr& e, const Point& p, const Constants& constants) {
  const auto j = evaluate<2>(e, p, constants);
  FrameScalar s;
  s.value = j.value();
  Mat3 h{};
  for (int a = 0; a < 3; ++a) {
    s.d1[a] = j.grad(a);
    for (int b = 0; b < 3; ++b) h[a][b] = j.hess(a, b);
  }
  s.d2 = h;
  return s;
}

}  // namespace

IntegrabilityData extract_data(const FrameModel& model, const Point& p) {
  const auto jets = frame_jets<3>(model, p);
  return assemble(extract_jets(jets.frame, jets.metric), jets.frame, gram_defect(jets.frame, jets.metric));
}

IntegrabilityData data_at(const FrameModel& model, const Point& p) {
  if (model.is_chart()) return extract_data(model, p);
  const auto& dm = model.data_mode();
  IntegrabilityData d;
  d.provenance = Provenance::Declared;
  d.f1 = declared(dm.f1, p, model.constants);
  d.f2 = declared(dm.f2, p, model.constants);
  d.k1 = declared(dm.k1, p, model.constants);
  d.k2 = declared(dm.k2, p, model.constants);
  d.sigma = declared(dm.sigma, p, model.constants);
  return d;
}

std::array<Vec3, 3> reassembled_brackets(const FrameModel& model, const Point& p, const IntegrabilityData& d) {
  const auto jets = frame_jets<0>(model, p);
  Mat3 e{};
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) e[i][a] = jets.frame[i][a].value();
  std::array<Vec3, 3> out{};
  for (int a = 0; a < 3; ++a) {
    out[0][a] = d.f1.value * e[0][a] + d.f2.value * e[1][a] - 2.0 * d.sigma.value * e[2][a];
    out[1][a] = d.k1.value * e[2][a];
    out[2][a] = d.k2.value * e[2][a];
  }
  return out;
}

VerticalConstancyReport check_vertical_constancy(const FrameModel& model) {
  VerticalConstancyReport report;
  for (const auto& p : model.chart.samples()) {
    const auto d = data_at(model, p);
    const std::array<double, 5> v{d.f1.d1[kVertical], d.f2.d1[kVertical], d.k1.d1[kVertical],
                                  d.k2.d1[kVertical], d.sigma.d1[kVertical]};
    for (double x : v) report.max_abs = std::max(report.max_abs, std::abs(x));
    report.points.push_back(p);
    report.values.push_back(v);
  }
  report.constant = report.max_abs < kVerticalTolerance;
  return report;
}

double jacobi_residual(const IntegrabilityData& d) {
  return 2.0 * d.sigma.d1[2] + d.k1.value * d.f1.value + d.k2.value * d.f2.value + d.k1.d1[1] - d.k2.d1[0];
}

namespace {

// Re-expresses the derivatives of u along e'_i = R_ij e_j, where the rows of
// R depend on the point through theta and dtheta[k] = e_k(theta).
FrameScalar to_rotated(const FrameScalar& u, double c, double s, const Vec3& dtheta) {
  const Mat3 R{{{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}}};
  const Mat3 dR{{{-s, c, 0.0}, {-c, -s, 0.0}, {0.0, 0.0, 0.0}}};
  FrameScalar out;
  out.value = u.value;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.d1[i] += R[i][j] * u.d1[j];
  if (u.d2) {
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            v += R[i][k] * (dtheta[k] * dR[j][l] * u.d1[l] + R[j][l] * (*u.d2)[k][l]);
        m[i][j] = v;
      }
    out.d2 = m;
  }
  return out;
}

FrameScalar sqrt_of(const FrameScalar& u) {
  const double v = std::sqrt(u.value);
  return apply(u, v, 0.5 / v, -0.25 / (v * u.value));
}

}  // namespace

Rotation rotate_frame(const IntegrabilityData& d) {
  Rotation r;
  const double r2 = d.k1.value * d.k1.value + d.k2.value * d.k2.value;
  if (r2 < kDegenerateRotation) {
    r.data = d;
    r.degenerate = true;
    return r;
  }
  r.theta = std::atan2(d.k2.value, d.k1.value);

  const FrameScalar norm = sqrt_of(d.k1 * d.k1 + d.k2 * d.k2);
  const FrameScalar c = d.k1 / norm;
  const FrameScalar s = d.k2 / norm;

  Vec3 dtheta{};
  for (int a = 0; a < 3; ++a) dtheta[a] = (d.k1.value * d.k2.d1[a] - d.k2.value * d.k1.d1[a]) / r2;

  // e_a(theta) as frame scalars; their derivatives need second derivatives of k.
  auto theta_derivative = [&](int a) {
    return (d.k1 * d.k2.derivative(a) - d.k2 * d.k1.derivative(a)) / (norm * norm);
  };
  const FrameScalar g1 = d.f1 - theta_derivative(0);
  const FrameScalar g2 = d.f2 - theta_derivative(1);

  const double cv = c.value;
  const double sv = s.value;
  IntegrabilityData out;
  out.provenance = d.provenance;
  out.residuals = d.residuals;
  out.k1 = to_rotated(c * d.k1 + s * d.k2, cv, sv, dtheta);
  out.k2 = to_rotated(c * d.k2 - s * d.k1, cv, sv, dtheta);
  out.f1 = to_rotated(c * g1 + s * g2, cv, sv, dtheta);
  out.f2 = to_rotated(c * g2 - s * g1, cv, sv, dtheta);
  out.sigma = to_rotated(d.sigma, cv, sv, dtheta);
  r.data = out;
  return r;
}

Rotation rotate_frame_chart(const FrameModel& model, const Point& p) {
  const auto jets = frame_jets<3>(model, p);
  const auto original = extract_jets(jets.frame, jets.metric);
  Rotation r;
  const double r2 = original.k1.value() * original.k1.value() + original.k2.value() * original.k2.value();
  if (r2 < kDegenerateRotation) {
    r.data = assemble(original, jets.frame, gram_defect(jets.frame, jets.metric));
    r.degenerate = true;
    return r;
  }
  r.theta = std::atan2(original.k2.value(), original.k1.value());

  const Jet<2> norm = sqrt(original.k1 * original.k1 + original.k2 * original.k2);
  const Jet<2> c = original.k1 / norm;
  const Jet<2> s = original.k2 / norm;

  JetMat<2> frame, metric;
  for (int a = 0; a < 3; ++a) {
    const auto e1 = truncate<2>(jets.frame[0][a]);
    const auto e2 = truncate<2>(jets.frame[1][a]);
    frame[0][a] = c * e1 + s * e2;
    frame[1][a] = c * e2 - s * e1;
    frame[2][a] = truncate<2>(jets.frame[2][a]);
    metric[a] = truncate_vec<2>(jets.metric[a]);
  }
  r.data = assemble(extract_jets(frame, metric), frame, gram_defect(frame, metric));
  return r;
}

}  // namespace bihar
