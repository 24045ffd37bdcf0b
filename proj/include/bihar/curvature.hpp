#pragma once

#include <array>

#include "bihar/geometry.hpp"
#include "bihar/submersion.hpp"

namespace bihar {

// All index arguments below are zero-based: 0, 1, 2 stand for e1, e2, e3.

using Tensor3 = std::array<std::array<std::array<double, 3>, 3>, 3>;
using Tensor4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;

/// gamma[i][j][k] is the e_k component of nabla_{e_i} e_j.
struct ConnectionTable {
  Tensor3 gamma{};
};

double max_abs_difference(const ConnectionTable& a, const ConnectionTable& b);

/// Largest violation of g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k) = 0.
double metric_compatibility_defect(const ConnectionTable& t);

/// The table built directly from the integrability data.
ConnectionTable connection_closed_form(const IntegrabilityData& d);

struct KoszulTerms {
  ConnectionTable table;
  /// Largest |X g(Y,Z)| over frame triples; these terms vanish for an
  /// orthonormal frame but are evaluated all the same.
  double metric_derivative_terms = 0.0;
};

/// Koszul formula on frame triples of a chart model.
KoszulTerms connection_koszul_oracle(const FrameModel& model, const Point& p);

/// nabla_{e_i} e_j from the coordinate Christoffel symbols of the metric.
ConnectionTable connection_christoffel_oracle(const FrameModel& model, const Point& p);

/// R[i][j][k][l] = g(R(e_i,e_j)e_k, e_l) with
/// R(E,F) = nabla_E nabla_F - nabla_F nabla_E - nabla_[E,F].
struct CurvatureComponents {
  Tensor4 R{};
};

/// Frame computation from the connection coefficients, their frame
/// derivatives and the structure constants.
CurvatureComponents curvature_from_data(const IntegrabilityData& d);

/// Coordinate Riemann tensor of the chart metric contracted with the frame.
CurvatureComponents curvature_chart_oracle(const FrameModel& model, const Point& p);

/// The seven independent combinations written directly in terms of the data.
struct NamedComponents {
  double r1312 = 0, r1313 = 0, r1323 = 0, r1212 = 0, r1223 = 0, r2313 = 0, r2323 = 0;

  std::array<double, 7> values() const { return {r1312, r1313, r1323, r1212, r1223, r2313, r2323}; }
  static constexpr std::array<const char*, 7> names{"R1312", "R1313", "R1323", "R1212",
                                                    "R1223", "R2313", "R2323"};
};

NamedComponents named_components(const IntegrabilityData& d);
NamedComponents named_components(const CurvatureComponents& c);

struct SymmetryDefects {
  double antisymmetry = 0.0;  // in (i,j) and in (k,l)
  double pair_symmetry = 0.0;
  double bianchi = 0.0;
};

SymmetryDefects symmetry_defects(const CurvatureComponents& c);

/// max |R_ijkl - c (g_jk g_il - g_ik g_jl)|.
double space_form_residual(const CurvatureComponents& c, double curvature);

/// K = R_ijji / (g_ii g_jj - g_ij^2). Throws DegeneratePlane.
double sectional_curvature(const CurvatureComponents& c, int i, int j, const Mat3& g = frame_metric());

/// T[i][j] and A[i][j] are the frame components of T_{e_i} e_j and A_{e_i} e_j.
struct ONeillTensors {
  std::array<std::array<Vec3, 3>, 3> T{};
  std::array<std::array<Vec3, 3>, 3> A{};
};

ONeillTensors oneill_tensors(const ConnectionTable& t);
ONeillTensors oneill_tensors(const IntegrabilityData& d);

/// Largest violation among: T symmetric on vertical pairs, A skew on
/// horizontal pairs, and A_XY = (1/2) vertical part of [X,Y].
double oneill_identity_defect(const ONeillTensors& o, const IntegrabilityData& d);

double base_gauss_curvature(const IntegrabilityData& d);

/// |K^B - K(e1,e2) - 3 g(A_{e1}e2, A_{e1}e2) / (g11 g22 - g12^2)|.
double check_oneill_equation(const IntegrabilityData& d);

}  // namespace bihar
