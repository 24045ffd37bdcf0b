#include "bihar/biharmonic.hpp"

#include <cmath>
#include <tuple>

#include "bihar/error.hpp"

namespace bihar {

double TensionVector::norm() const { return std::hypot(t1, t2); }
double BitensionVector::norm() const { return std::hypot(b1, b2); }

namespace {

// nabla^pi_{e_i} eps_a = sum_b omega[i][a][b] eps_b, for a base frame pulled back.
using PullbackTable = std::array<std::array<std::array<FrameScalar, 2>, 2>, 3>;

PullbackTable pullback_connection(const IntegrabilityData& d) {
  PullbackTable w;
  for (auto& i : w)
    for (auto& a : i)
      for (auto& b : a) b = FrameScalar::constant(0.0);
  w[0][0][1] = -d.f1;
  w[0][1][0] = d.f1;
  w[1][0][1] = -d.f2;
  w[1][1][0] = d.f2;
  return w;
}

using Section = std::array<FrameScalar, 2>;

Section covariant(const Section& s, int i, const PullbackTable& w) {
  Section out;
  for (int b = 0; b < 2; ++b) {
    out[b] = s[b].derivative(i);
    for (int a = 0; a < 2; ++a) out[b] = out[b] + s[a] * w[i][a][b];
  }
  return out;
}

}  // namespace

TensionVector tension(const ConnectionTable& t) {
  std::array<double, 2> tau{};
  for (int i = 0; i < 3; ++i) {
    for (int b = 0; b < 2; ++b) {
      // nabla^pi_{e_i} d pi(e_i) is the horizontal part of nabla_{e_i} e_i
      // for horizontal e_i and zero for the vertical leg.
      const double pullback = i == kVertical ? 0.0 : t.gamma[i][i][b];
      tau[b] += kSignature[i] * (pullback - t.gamma[i][i][b]);
    }
  }
  return {tau[0], tau[1]};
}

TensionVector tension(const IntegrabilityData& d) { return tension(connection_closed_form(d)); }

double frame_laplacian(const FrameScalar& u, const IntegrabilityData& d) {
  const Mat3& h = u.second();
  const auto& e = u.d1;
  return h[0][0] + h[1][1] - h[2][2] + e[1] * d.f1.value - e[0] * d.f2.value - e[0] * d.k1.value -
         e[1] * d.k2.value;
}

BitensionVector bitension_closed_form(const IntegrabilityData& d) {
  const auto& [f1, f2, k1, k2] = std::tie(d.f1, d.f2, d.k1, d.k2);
  const double KB = base_gauss_curvature(d);
  const double bracket_term = f1.value * f1.value + f2.value * f2.value - KB;

  const FrameScalar k2f1 = k2 * f1, k2f2 = k2 * f2, k1f1 = k1 * f1, k1f2 = k1 * f2;
  BitensionVector b;
  b.b1 = -frame_laplacian(k1, d) - f1.value * k2.d1[0] - k2f1.d1[0] - f2.value * k2.d1[1] - k2f2.d1[1] +
         k1.value * k2.value * f1.value + k2.value * k2.value * f2.value + k1.value * bracket_term;
  b.b2 = -frame_laplacian(k2, d) + f1.value * k1.d1[0] + k1f1.d1[0] + f2.value * k1.d1[1] + k1f2.d1[1] -
         k1.value * k2.value * f2.value - k1.value * k1.value * f1.value + k2.value * bracket_term;
  return b;
}

BitensionVector bitension_generic_oracle(const IntegrabilityData& d) {
  if (!d.k1.has_second() || !d.k2.has_second())
    throw PreconditionViolation("bitension needs second frame derivatives of k1 and k2");
  const auto w = pullback_connection(d);
  const auto gamma = connection_closed_form(d);
  const double KB = base_gauss_curvature(d);

  const Section tau{-d.k1, -d.k2};
  std::array<Section, 3> D;
  for (int m = 0; m < 3; ++m) D[m] = covariant(tau, m, w);

  // R^B(X,Y)Z = K^B (<Y,Z> X - <X,Z> Y) on the surface, with X = d pi(e_i).
  auto base_curvature = [&](int i) -> std::array<double, 2> {
    if (i == kVertical) return {0.0, 0.0};
    std::array<double, 2> X{};
    X[i] = 1.0;
    const std::array<double, 2> Y{tau[0].value, tau[1].value};
    const double yz = Y[0] * X[0] + Y[1] * X[1];
    const double xz = 1.0;
    return {KB * (yz * X[0] - xz * Y[0]), KB * (yz * X[1] - xz * Y[1])};
  };

  std::array<double, 2> out{};
  for (int i = 0; i < 3; ++i) {
    const Section DD = covariant(D[i], i, w);
    const auto Rb = base_curvature(i);
    for (int b = 0; b < 2; ++b) {
      double along_nabla = 0.0;
      for (int m = 0; m < 3; ++m) along_nabla += gamma.gamma[i][i][m] * D[m][b].value;
      out[b] += kSignature[i] * (DD[b].value - along_nabla - Rb[b]);
    }
  }
  return {out[0], out[1]};
}

ReducedResidual reduced_residual(const IntegrabilityData& d) {
  if (std::abs(d.k2.value) >= kVanishingK2)
    throw PreconditionViolation("reduced system requires k2 = 0 (|k2| = " + std::to_string(std::abs(d.k2.value)) +
                                ")");
  const auto& [f1, f2, k1] = std::tie(d.f1, d.f2, d.k1);
  const double KB = base_gauss_curvature(d);
  const FrameScalar k1f1 = k1 * f1, k1f2 = k1 * f2;
  ReducedResidual r;
  r.r1 = -frame_laplacian(k1, d) + k1.value * (f1.value * f1.value + f2.value * f2.value - KB);
  r.r2 = f1.value * k1.d1[0] + k1f1.d1[0] + f2.value * k1.d1[1] + k1f2.d1[1] - k1.value * k1.value * f1.value;
  return r;
}

}  // namespace bihar
