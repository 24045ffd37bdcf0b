#pragma once

#include "bihar/curvature.hpp"
#include "bihar/geometry.hpp"
#include "bihar/submersion.hpp"

namespace bihar {

/// Components of tau(pi) along the base frame (eps1, eps2).
struct TensionVector {
  double t1 = 0.0, t2 = 0.0;
  double norm() const;
};

/// Components of the bitension field along (eps1, eps2).
struct BitensionVector {
  double b1 = 0.0, b2 = 0.0;
  double norm() const;
};

/// Trace of the second fundamental form of pi, assembled from a connection
/// table: the pullback connection on horizontal pairs is the horizontal part
/// of nabla, and d pi kills e3.
TensionVector tension(const ConnectionTable& t);
TensionVector tension(const IntegrabilityData& d);

/// Laplace-Beltrami operator of the total space applied to a scalar u that
/// carries second frame derivatives. Throws PreconditionViolation otherwise.
double frame_laplacian(const FrameScalar& u, const IntegrabilityData& d);

BitensionVector bitension_closed_form(const IntegrabilityData& d);

/// Bitension from its definition as a section of the pullback bundle:
/// sum_i eps_i { D_i D_i tau - D_{nabla_i e_i} tau - R^B(d pi e_i, tau) d pi e_i }.
BitensionVector bitension_generic_oracle(const IntegrabilityData& d);

struct ReducedResidual {
  double r1 = 0.0, r2 = 0.0;
};

inline constexpr double kVanishingK2 = 1e-12;

/// The bitension system specialised to k2 = 0. Throws PreconditionViolation
/// when |k2| >= kVanishingK2.
ReducedResidual reduced_residual(const IntegrabilityData& d);

}  // namespace bihar
