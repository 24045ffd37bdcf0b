#pragma once
// Shared test fixtures: synthetic adapted frames, random data-mode models,
// a domain-aware random expression generator and finite-difference oracles.

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bihar/classify.hpp"
#include "bihar/expr.hpp"
#include "bihar/geometry.hpp"
#include "bihar/submersion.hpp"

namespace bihar::fixtures {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Shortest round-trip text of v; negative values come out parenthesised.
std::string literal(double v);

/// a0 + a1 x + a2 y + a3 x y + a4 x^2 + a5 y^2 with |a_i| <= scale.
std::string random_poly(Rng& rng, double scale);

struct SyntheticOptions {
  bool vertical_beta = false;  // let the e3 length depend on z as well
  bool twist = false;          // rotate e1, e2 with z, which breaks adaptedness
  std::array<int, 3> grid{3, 3, 3};
};

/// A random orthonormal frame adapted to the projection (x, y, z) -> (x, y):
///   e1 = (l cos t, l sin t, h1), e2 = (-l sin t, l cos t, h2), e3 = (0, 0, b)
/// with l = exp(p), b = exp(q) and h_i affine in z.
Json synthetic_chart_json(Rng& rng, const SyntheticOptions& options = {});
FrameModel synthetic_chart(Rng& rng, const SyntheticOptions& options = {});

/// A smooth random function of (x, y, z) built from trigonometric,
/// exponential and polynomial terms of moderate size.
std::string random_smooth(Rng& rng);

/// Data-mode model with random smooth data on [-1, 1]^3 and no space form.
FrameModel random_data_model(Rng& rng, std::array<int, 3> grid = {3, 3, 3});

/// The builtin example on [x.lo, x.hi] with n sample points along x.
FrameModel example1(double c, Interval x = {0.5, 3.0}, int n = 24);

/// phi(x) = c (1 + e^{cx}) / (1 - e^{cx}) and its first two derivatives,
/// written out by hand.
double phi(double c, double x);
double phi_prime(double c, double x);
double phi_second(double c, double x);

/// Data-mode model whose five data are the given constants.
FrameModel constant_data(double f1, double f2, double k1, double k2, double sigma,
                         std::optional<double> c = std::nullopt);

/// Chart frames realising constant data exactly:
///   e1 = d/dx, e2 = exp(F x) d/dy, e3 = exp(K x) d/dz   (f2 = F, k1 = K)
FrameModel exponential_chart(double F, double K);
///   e1 = d/dx, e2 = d/dy - 2 s x d/dz, e3 = d/dz       (sigma = s)
FrameModel heisenberg_chart(double s);

// ---------------------------------------------------------------------------
// Finite differences

using ScalarFn = std::function<double(const Point&)>;

double central_difference(const ScalarFn& f, const Point& p, int axis, double h);
double second_difference(const ScalarFn& f, const Point& p, int a, int b, double h);

/// How far a jet strays from finite differences, measured in units of the
/// tolerances max(1e-6, 1e-6|grad|) (step 1e-5) and max(1e-4, 1e-4|hess|)
/// (step 1e-4). Values at most 1 pass.
struct FdExcess {
  double grad = 0.0;
  double hess = 0.0;
};
FdExcess fd_excess(const Expr& e, const Point& p, const Constants& constants);

// ---------------------------------------------------------------------------
// Random expressions

/// Grows random trees bottom-up. Every candidate subtree is evaluated at the
/// probe points and rejected when it would leave the domain of a function,
/// divide by something small or grow beyond a modest bound, so the finished
/// expression is smooth in a neighbourhood of every probe point.
class ExprGenerator {
 public:
  ExprGenerator(Rng& rng, std::vector<Point> probes, Constants constants);

  /// A tree whose depth does not exceed `depth`.
  Expr generate(int depth);

  static SymbolTable symbols();
  const Constants& constants() const { return constants_; }
  const std::vector<Point>& probes() const { return probes_; }

 private:
  struct Range {
    double min_abs, max_abs, min;
    bool ok;
  };
  Range range(const Expr& e) const;
  Expr leaf();
  std::optional<Expr> candidate(int depth);

  Rng& rng_;
  std::vector<Point> probes_;
  Constants constants_;
};

/// Random points in the open cube (-r, r)^3.
std::vector<Point> random_points(Rng& rng, int n, double r = 1.0);

}  // namespace bihar::fixtures
