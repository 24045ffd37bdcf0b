#include "bihar/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "bihar/error.hpp"

namespace bihar {

namespace {

using FrameTable = std::array<std::array<std::array<FrameScalar, 3>, 3>, 3>;

FrameTable closed_form_table(const IntegrabilityData& d) {
  FrameTable G;
  for (auto& a : G)
    for (auto& b : a)
      for (auto& c : b) c = FrameScalar::constant(0.0);
  const auto& [f1, f2, k1, k2, s] = std::tie(d.f1, d.f2, d.k1, d.k2, d.sigma);
  G[0][0][1] = -f1;
  G[0][1][0] = f1;
  G[0][1][2] = -s;
  G[0][2][1] = -s;
  G[1][0][1] = -f2;
  G[1][0][2] = s;
  G[1][1][0] = f2;
  G[1][2][0] = s;
  G[2][0][1] = -s;
  G[2][0][2] = -k1;
  G[2][1][0] = s;
  G[2][1][2] = -k2;
  G[2][2][0] = -k1;
  G[2][2][1] = -k2;
  return G;
}

template <int N>
JetMat<N> inverse(const JetMat<N>& m) {
  auto cof = [&](int r, int c) {
    const int r1 = (r + 1) % 3, r2 = (r + 2) % 3, c1 = (c + 1) % 3, c2 = (c + 2) % 3;
    return m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
  };
  const Jet<N> det = m[0][0] * cof(0, 0) + m[0][1] * cof(0, 1) + m[0][2] * cof(0, 2);
  if (std::abs(det.value()) < 1e-300) throw DomainError("singular metric", "metric");
  const Jet<N> inv = reciprocal(det);
  JetMat<N> out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[c][r] = cof(r, c) * inv;
  return out;
}

// Gamma[d][a][b] = coordinate Christoffel symbols with one order of derivatives.
std::array<JetMat<1>, 3> christoffel(const JetMat<2>& g) {
  JetMat<1> g1;
  for (int a = 0; a < 3; ++a) g1[a] = truncate_vec<1>(g[a]);
  const auto ginv = inverse(g1);
  std::array<JetMat<1>, 3> dg;  // dg[c][a][b] = d_c g_ab
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dg[c][a][b] = partial(g[a][b], c);
  std::array<JetMat<1>, 3> G{};
  for (int d = 0; d < 3; ++d)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int e = 0; e < 3; ++e) G[d][a][b] += ginv[d][e] * (dg[a][e][b] + dg[b][e][a] - dg[e][a][b]) * 0.5;
  return G;
}

}  // namespace

double max_abs_difference(const ConnectionTable& a, const ConnectionTable& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(a.gamma[i][j][k] - b.gamma[i][j][k]));
  return m;
}

double metric_compatibility_defect(const ConnectionTable& t) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        m = std::max(m, std::abs(kSignature[k] * t.gamma[i][j][k] + kSignature[j] * t.gamma[i][k][j]));
  return m;
}

ConnectionTable connection_closed_form(const IntegrabilityData& d) {
  const auto G = closed_form_table(d);
  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) t.gamma[i][j][k] = G[i][j][k].value;
  return t;
}

KoszulTerms connection_koszul_oracle(const FrameModel& model, const Point& p) {
  const auto jets = frame_jets<1>(model, p);
  const auto& e = jets.frame;
  JetMat<0> g0, e0;
  for (int a = 0; a < 3; ++a) {
    g0[a] = truncate_vec<0>(jets.metric[a]);
    e0[a] = truncate_vec<0>(e[a]);
  }
  // X(g(Y,Z)) for frame fields X = e_x.
  std::array<std::array<std::array<double, 3>, 3>, 3> dgram{};
  KoszulTerms out;
  for (int y = 0; y < 3; ++y)
    for (int z = 0; z < 3; ++z) {
      const Jet<1> gyz = inner(jets.metric, e[y], e[z]);
      for (int x = 0; x < 3; ++x) {
        double v = 0.0;
        for (int a = 0; a < 3; ++a) v += e[x][a].value() * gyz.grad(a);
        dgram[x][y][z] = v;
        out.metric_derivative_terms = std::max(out.metric_derivative_terms, std::abs(v));
      }
    }
  std::array<std::array<JetVec<0>, 3>, 3> br;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) br[x][y] = bracket<1>(e[x], e[y]);
  auto gb = [&](int x, int y, int z) { return inner(g0, br[x][y], e0[z]).value(); };

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double twice = dgram[i][j][k] + dgram[j][i][k] - dgram[k][i][j] + gb(i, j, k) - gb(i, k, j) -
                             gb(j, k, i);
        out.table.gamma[i][j][k] = kSignature[k] * 0.5 * twice;
      }
  return out;
}

ConnectionTable connection_christoffel_oracle(const FrameModel& model, const Point& p) {
  const auto jets = frame_jets<2>(model, p);
  const auto G = christoffel(jets.metric);
  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vec3 v{};
      for (int d = 0; d < 3; ++d)
        for (int a = 0; a < 3; ++a) {
          double inner_v = jets.frame[j][d].grad(a);
          for (int b = 0; b < 3; ++b) inner_v += G[d][a][b].value() * jets.frame[j][b].value();
          v[d] += jets.frame[i][a].value() * inner_v;
        }
      for (int k = 0; k < 3; ++k) {
        double gk = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) gk += jets.metric[a][b].value() * v[a] * jets.frame[k][b].value();
        t.gamma[i][j][k] = kSignature[k] * gk;
      }
    }
  return t;
}

CurvatureComponents curvature_from_data(const IntegrabilityData& d) {
  const auto G = closed_form_table(d);
  CurvatureComponents out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = G[j][k][l].d1[i] - G[i][k][l].d1[j];
          for (int m = 0; m < 3; ++m) {
            const double structure = G[i][j][m].value - G[j][i][m].value;
            v += G[j][k][m].value * G[i][m][l].value - G[i][k][m].value * G[j][m][l].value -
                 structure * G[m][k][l].value;
          }
          out.R[i][j][k][l] = kSignature[l] * v;
        }
  return out;
}

CurvatureComponents curvature_chart_oracle(const FrameModel& model, const Point& p) {
  const auto jets = frame_jets<2>(model, p);
  const auto G = christoffel(jets.metric);
  // Rlow[m][c][a][b] = g_md R^d_cab with
  // R^d_cab = d_a G^d_bc - d_b G^d_ac + G^d_ae G^e_bc - G^d_be G^e_ac.
  Tensor4 Rlow{};
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Vec3 up{};
        for (int d = 0; d < 3; ++d) {
          double v = G[d][b][c].grad(a) - G[d][a][c].grad(b);
          for (int e = 0; e < 3; ++e)
            v += G[d][a][e].value() * G[e][b][c].value() - G[d][b][e].value() * G[e][a][c].value();
          up[d] = v;
        }
        for (int m = 0; m < 3; ++m) {
          double v = 0.0;
          for (int d = 0; d < 3; ++d) v += jets.metric[m][d].value() * up[d];
          Rlow[m][c][a][b] = v;
        }
      }
  Mat3 e{};
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) e[i][a] = jets.frame[i][a].value();

  // Contract one slot at a time: R_ijkl = e_i^a e_j^b e_k^c e_l^m Rlow[m][c][a][b].
  Tensor4 t1{}, t2{}, t3{};
  for (int l = 0; l < 3; ++l)
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int m = 0; m < 3; ++m) t1[l][c][a][b] += e[l][m] * Rlow[m][c][a][b];
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) t2[l][k][a][b] += e[k][c] * t1[l][c][a][b];
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 3; ++b)
          for (int a = 0; a < 3; ++a) t3[l][k][i][b] += e[i][a] * t2[l][k][a][b];
  CurvatureComponents out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = 0.0;
          for (int b = 0; b < 3; ++b) v += e[j][b] * t3[l][k][i][b];
          out.R[i][j][k][l] = v;
        }
  return out;
}

NamedComponents named_components(const IntegrabilityData& d) {
  const double f1 = d.f1.value, f2 = d.f2.value, k1 = d.k1.value, k2 = d.k2.value, s = d.sigma.value;
  NamedComponents n;
  n.r1312 = -d.sigma.d1[0] + 2.0 * k1 * s;
  n.r1313 = d.k1.d1[0] - s * s - k1 * k1 + k2 * f1;
  n.r1323 = d.k2.d1[0] - d.sigma.d1[2] - k1 * f1 - k1 * k2;
  n.r1212 = d.f1.d1[1] - d.f2.d1[0] + f1 * f1 + f2 * f2 - 3.0 * s * s;
  n.r1223 = -d.sigma.d1[1] + 2.0 * k2 * s;
  n.r2313 = d.k1.d1[1] + d.sigma.d1[2] + k2 * f2 - k1 * k2;
  n.r2323 = -s * s + d.k2.d1[1] - k1 * f2 - k2 * k2;
  return n;
}

NamedComponents named_components(const CurvatureComponents& c) {
  const auto& R = c.R;
  NamedComponents n;
  n.r1312 = R[0][2][0][1];
  n.r1313 = R[0][2][0][2];
  n.r1323 = R[0][2][1][2];
  n.r1212 = R[0][1][0][1];
  n.r1223 = R[0][1][1][2];
  n.r2313 = R[1][2][0][2];
  n.r2323 = R[1][2][1][2];
  return n;
}

SymmetryDefects symmetry_defects(const CurvatureComponents& c) {
  const auto& R = c.R;
  SymmetryDefects s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          s.antisymmetry = std::max({s.antisymmetry, std::abs(R[i][j][k][l] + R[j][i][k][l]),
                                     std::abs(R[i][j][k][l] + R[i][j][l][k])});
          s.pair_symmetry = std::max(s.pair_symmetry, std::abs(R[i][j][k][l] - R[k][l][i][j]));
          s.bianchi = std::max(s.bianchi, std::abs(R[i][j][k][l] + R[j][k][i][l] + R[k][i][j][l]));
        }
  return s;
}

double space_form_residual(const CurvatureComponents& c, double curvature) {
  const Mat3 g = frame_metric();
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double model = curvature * (g[j][k] * g[i][l] - g[i][k] * g[j][l]);
          m = std::max(m, std::abs(c.R[i][j][k][l] - model));
        }
  return m;
}

double sectional_curvature(const CurvatureComponents& c, int i, int j, const Mat3& g) {
  const double denom = g[i][i] * g[j][j] - g[i][j] * g[i][j];
  if (std::abs(denom) < 1e-14)
    throw DegeneratePlane("plane spanned by e" + std::to_string(i + 1) + " and e" + std::to_string(j + 1) +
                          " is degenerate");
  return c.R[i][j][j][i] / denom;
}

ONeillTensors oneill_tensors(const ConnectionTable& t) {
  auto horizontal = [](const std::array<double, 3>& v) { return Vec3{v[0], v[1], 0.0}; };
  auto vertical = [](const std::array<double, 3>& v) { return Vec3{0.0, 0.0, v[2]}; };
  ONeillTensors o;
  const int v = kVertical;
  // T_E F = h nabla_{vE} vF + v nabla_{vE} hF; only E = e3 contributes.
  for (int j = 0; j < 3; ++j) o.T[v][j] = j == v ? horizontal(t.gamma[v][j]) : vertical(t.gamma[v][j]);
  // A_E F = v nabla_{hE} hF + h nabla_{hE} vF; only horizontal E contributes.
  for (int i = 0; i < 3; ++i) {
    if (i == v) continue;
    for (int j = 0; j < 3; ++j) o.A[i][j] = j == v ? horizontal(t.gamma[i][j]) : vertical(t.gamma[i][j]);
  }
  return o;
}

ONeillTensors oneill_tensors(const IntegrabilityData& d) { return oneill_tensors(connection_closed_form(d)); }

double oneill_identity_defect(const ONeillTensors& o, const IntegrabilityData& d) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) {
    m = std::max(m, std::abs(o.T[2][2][k] - o.T[2][2][k]));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(o.A[i][j][k] + o.A[j][i][k]));
  }
  // Vertical part of [e1,e2] is -2 sigma e3.
  const Vec3 half_bracket{0.0, 0.0, -d.sigma.value};
  for (int k = 0; k < 3; ++k) {
    m = std::max(m, std::abs(o.A[0][1][k] - half_bracket[k]));
    m = std::max(m, std::abs(o.A[1][0][k] + half_bracket[k]));
  }
  return m;
}

double base_gauss_curvature(const IntegrabilityData& d) {
  const double f1 = d.f1.value, f2 = d.f2.value;
  return -(-d.f2.d1[0] + d.f1.d1[1] + f1 * f1 + f2 * f2);
}

double check_oneill_equation(const IntegrabilityData& d) {
  const auto R = curvature_from_data(d);
  const Mat3 g = frame_metric();
  const double k12 = sectional_curvature(R, 0, 1, g);
  const auto o = oneill_tensors(d);
  const Vec3& a = o.A[0][1];
  double gaa = 0.0;
  for (int k = 0; k < 3; ++k) gaa += kSignature[k] * a[k] * a[k];
  const double denom = g[0][0] * g[1][1] - g[0][1] * g[0][1];
  return std::abs(base_gauss_curvature(d) - k12 - 3.0 * gaa / denom);
}

}  // namespace bihar
