#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bihar/expr.hpp"
#include "bihar/jet.hpp"

namespace bihar {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// g(e1,e1) = g(e2,e2) = +1, g(e3,e3) = -1; e3 is the vertical, timelike leg.
inline constexpr std::array<double, 3> kSignature{1.0, 1.0, -1.0};
inline constexpr int kVertical = 2;

Mat3 frame_metric();

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// A coordinate box together with the interior points that verification
/// routines sample.
class Chart {
 public:
  Chart(std::array<std::string, 3> coords, std::array<Interval, 3> domain, std::vector<Point> samples);

  /// Uniform interior lattice with n[a] points along axis a.
  static Chart with_grid(std::array<std::string, 3> coords, std::array<Interval, 3> domain,
                         std::array<int, 3> n = {3, 3, 3});

  const std::array<std::string, 3>& coords() const { return coords_; }
  const std::array<Interval, 3>& domain() const { return domain_; }
  const std::vector<Point>& samples() const { return samples_; }
  bool interior(const Point& p) const;

 private:
  std::array<std::string, 3> coords_;
  std::array<Interval, 3> domain_;
  std::vector<Point> samples_;
};

struct VectorField {
  std::array<Expr, 3> coeffs;
};

/// A genuine chart: three frame fields in coordinate components and the
/// coordinate metric.
struct ChartMode {
  std::array<VectorField, 3> frame;
  std::array<std::array<Expr, 3>, 3> metric;
};

/// Integrability data given directly. The abstract frame acts on the data
/// as coordinate derivatives: e_i(u) = du/dx^i.
struct DataMode {
  Expr f1, f2, k1, k2, sigma;
};

struct FrameModel {
  std::string name;
  Chart chart;
  Constants constants;
  std::variant<ChartMode, DataMode> mode;
  std::optional<Expr> space_form_c;  // constants only

  bool is_chart() const { return std::holds_alternative<ChartMode>(mode); }
  const ChartMode& chart_mode() const;
  const DataMode& data_mode() const;
  std::optional<double> curvature_constant() const;
};

/// Check the structural invariants of a model (symbols, symmetric metric,
/// vertical independence of data when a space form is declared).
/// Throws ModelError.
void validate_structure(const FrameModel& model);

// ---------------------------------------------------------------------------
// Frame scalars

/// A scalar at a point with its derivatives along the adapted frame:
/// d1[i] = e_i(u) and, when available, d2[i][j] = e_i(e_j(u)).
struct FrameScalar {
  double value = 0.0;
  Vec3 d1{};
  std::optional<Mat3> d2;

  static FrameScalar constant(double v);
  bool has_second() const { return d2.has_value(); }
  const Mat3& second() const;  // throws PreconditionViolation when absent

  /// e_i(u) as a frame scalar (its derivatives come from d2).
  FrameScalar derivative(int i) const;
};

FrameScalar operator+(const FrameScalar& a, const FrameScalar& b);
FrameScalar operator-(const FrameScalar& a, const FrameScalar& b);
FrameScalar operator-(const FrameScalar& a);
FrameScalar operator*(const FrameScalar& a, const FrameScalar& b);
FrameScalar operator*(double s, const FrameScalar& a);
FrameScalar operator/(const FrameScalar& a, const FrameScalar& b);

/// g(u) given g, g', g'' at u.value().
FrameScalar apply(const FrameScalar& u, double g, double dg, double ddg);

// ---------------------------------------------------------------------------
// Vector-field calculus

double directional_derivative(const VectorField& X, const Expr& f, const Point& p, const Constants& constants);

/// X(f) together with its own coordinate gradient, so nested derivatives
/// such as e1(e1(k)) can be formed.
ScalarJet1 directional_derivative_jet(const VectorField& X, const Expr& f, const Point& p,
                                      const Constants& constants);

Vec3 lie_bracket(const VectorField& X, const VectorField& Y, const Point& p, const Constants& constants);

/// Coordinate metric for ChartMode; diag(+1,+1,-1) in the abstract frame for DataMode.
Mat3 metric_at(const FrameModel& model, const Point& p);

/// Gram matrix g(e_i, e_j) of a ChartMode frame.
Mat3 frame_gram(const FrameModel& model, const Point& p);

/// Largest |g(e_i,e_j) - diag(+1,+1,-1)| over the sample grid (0 for DataMode).
double orthonormality_defect(const FrameModel& model);

// ---------------------------------------------------------------------------
// Jets of frame and metric coefficients

template <int N>
using JetVec = std::array<Jet<N>, 3>;
template <int N>
using JetMat = std::array<std::array<Jet<N>, 3>, 3>;

template <int N>
struct FrameJets {
  JetMat<N> frame;   // frame[i][a] = a-th coordinate component of e_i
  JetMat<N> metric;  // metric[a][b]
};

template <int N>
FrameJets<N> frame_jets(const FrameModel& model, const Point& p) {
  const auto& cm = model.chart_mode();
  FrameJets<N> out;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      out.frame[i][a] = evaluate<N>(cm.frame[i].coeffs[a], p, model.constants);
      out.metric[i][a] = evaluate<N>(cm.metric[i][a], p, model.constants);
    }
  return out;
}

template <int M, int N>
JetVec<M> truncate_vec(const JetVec<N>& v) {
  return {truncate<M>(v[0]), truncate<M>(v[1]), truncate<M>(v[2])};
}

/// [X,Y]^a = X^b d_b Y^a - Y^b d_b X^a, one order lower than the inputs.
template <int N>
JetVec<N - 1> bracket(const JetVec<N>& X, const JetVec<N>& Y) {
  JetVec<N - 1> out{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      out[a] += truncate<N - 1>(X[b]) * partial(Y[a], b) - truncate<N - 1>(Y[b]) * partial(X[a], b);
  return out;
}

/// g(U, V) with all inputs at order N.
template <int N>
Jet<N> inner(const JetMat<N>& g, const JetVec<N>& U, const JetVec<N>& V) {
  Jet<N> s{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += g[a][b] * U[a] * V[b];
  return s;
}

/// X(f) for a jet f: sum_a X^a d_a f, one order lower.
template <int N>
Jet<N - 1> apply_field(const JetVec<N>& X, const Jet<N>& f) {
  Jet<N - 1> s{};
  for (int a = 0; a < 3; ++a) s += truncate<N - 1>(X[a]) * partial(f, a);
  return s;
}

/// Converts a coordinate jet into frame derivatives using frame jets of
/// order >= 1 (order >= 2 on f gives second frame derivatives).
template <int N, int M>
FrameScalar to_frame_scalar(const Jet<N>& f, const JetMat<M>& frame) {
  static_assert(M >= 1);
  FrameScalar s;
  s.value = f.value();
  if constexpr (N >= 1) {
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) s.d1[i] += frame[i][a].value() * f.grad(a);
  }
  if constexpr (N >= 2) {
    Mat3 d2{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        // e_i(e_j f) = e_i^a (d_a e_j^b d_b f + e_j^b d_a d_b f)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            v += frame[i][a].value() * (frame[j][b].grad(a) * f.grad(b) + frame[j][b].value() * f.hess(a, b));
        d2[i][j] = v;
      }
    s.d2 = d2;
  }
  return s;
}

}  // namespace bihar
