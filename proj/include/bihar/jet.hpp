#pragma once

// Truncated multivariate Taylor arithmetic in three variables.
//
// A Jet<N> holds the Taylor coefficients of a scalar field at a point up to
// total degree N, i.e. c[alpha] = d^alpha f / alpha! for |alpha| <= N.
// Arithmetic propagates the coefficients exactly (up to rounding), so the
// gradient and Hessian of any composite expression come out without finite
// differencing. Taking a partial derivative lowers the order by one, which is
// how brackets of frame fields are formed from jets of their coefficients.

#include <array>
#include <cmath>
#include <cstddef>

namespace bihar {

inline constexpr int kDim = 3;

namespace detail {

constexpr int jet_size(int order) {
  return order < 0 ? 0 : (order + 1) * (order + 2) * (order + 3) / 6;
}

template <int N>
struct JetLayout {
  static constexpr int size = jet_size(N);

  std::array<std::array<int, 3>, size> exponents{};
  std::array<int, size> degree{};
  int index[N + 1][N + 1][N + 1]{};

  struct Term {
    int lhs, rhs, out;
  };
  static constexpr int count_terms() {
    int n = 0;
    for (int d1 = 0; d1 <= N; ++d1)
      for (int d2 = 0; d1 + d2 <= N; ++d2)
        n += (jet_size(d1) - jet_size(d1 - 1)) * (jet_size(d2) - jet_size(d2 - 1));
    return n;
  }
  static constexpr int term_count = count_terms();
  std::array<Term, term_count> products{};

  constexpr JetLayout() {
    for (int a = 0; a <= N; ++a)
      for (int b = 0; b <= N; ++b)
        for (int c = 0; c <= N; ++c) index[a][b][c] = -1;
    int k = 0;
    for (int d = 0; d <= N; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          exponents[k] = {a, b, c};
          degree[k] = d;
          index[a][b][c] = k;
          ++k;
        }
    int t = 0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        if (degree[i] + degree[j] > N) continue;
        const auto& ei = exponents[i];
        const auto& ej = exponents[j];
        products[t++] = {i, j, index[ei[0] + ej[0]][ei[1] + ej[1]][ei[2] + ej[2]]};
      }
  }
};

template <int N>
inline constexpr JetLayout<N> kLayout{};

}  // namespace detail

template <int N>
class Jet {
  static_assert(N >= 0, "jet order must be non-negative");

 public:
  static constexpr int order = N;
  static constexpr int size = detail::jet_size(N);

  constexpr Jet() = default;

  static constexpr Jet constant(double v) {
    Jet j;
    j.c_[0] = v;
    return j;
  }

  /// The coordinate function x^axis expanded about `at`.
  static constexpr Jet variable(int axis, double at) {
    Jet j;
    j.c_[0] = at;
    if constexpr (N >= 1) {
      int e[3] = {0, 0, 0};
      e[axis] = 1;
      j.c_[detail::kLayout<N>.index[e[0]][e[1]][e[2]]] = 1.0;
    }
    return j;
  }

  constexpr double value() const { return c_[0]; }

  constexpr double grad(int a) const
    requires(N >= 1)
  {
    int e[3] = {0, 0, 0};
    e[a] = 1;
    return c_[detail::kLayout<N>.index[e[0]][e[1]][e[2]]];
  }

  constexpr double hess(int a, int b) const
    requires(N >= 2)
  {
    int e[3] = {0, 0, 0};
    e[a] += 1;
    e[b] += 1;
    const double t = c_[detail::kLayout<N>.index[e[0]][e[1]][e[2]]];
    return a == b ? 2.0 * t : t;
  }

  constexpr std::array<double, 3> gradient() const
    requires(N >= 1)
  {
    return {grad(0), grad(1), grad(2)};
  }

  /// Raw Taylor coefficient for the multi-index (a, b, c).
  constexpr double coeff(int a, int b, int c) const {
    if (a + b + c > N) return 0.0;
    return c_[detail::kLayout<N>.index[a][b][c]];
  }
  constexpr double& coeff_ref(int k) { return c_[k]; }
  constexpr double coeff_at(int k) const { return c_[k]; }

  constexpr Jet& operator+=(const Jet& o) {
    for (int k = 0; k < size; ++k) c_[k] += o.c_[k];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    for (int k = 0; k < size; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  constexpr Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend constexpr Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend constexpr Jet operator*(Jet a, double s) { return a *= s; }
  friend constexpr Jet operator*(double s, Jet a) { return a *= s; }
  friend constexpr Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend constexpr Jet operator+(double s, Jet a) { return a + s; }
  friend constexpr Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend constexpr Jet operator-(double s, const Jet& a) { return (-a) + s; }

  friend constexpr Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (const auto& t : detail::kLayout<N>.products) r.c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
    return r;
  }

  friend constexpr bool operator==(const Jet&, const Jet&) = default;

 private:
  std::array<double, size> c_{};
};

using ScalarJet1 = Jet<1>;
using ScalarJet2 = Jet<2>;

/// Drop all coefficients above degree M.
template <int M, int N>
constexpr Jet<M> truncate(const Jet<N>& j) {
  static_assert(M <= N, "truncate can only lower the order");
  Jet<M> r;
  for (int k = 0; k < Jet<M>::size; ++k) r.coeff_ref(k) = j.coeff_at(k);
  return r;
}

/// Exact partial derivative along `axis`; the result is one order lower.
template <int N>
constexpr Jet<N - 1> partial(const Jet<N>& j, int axis) {
  static_assert(N >= 1, "cannot differentiate a zeroth-order jet");
  Jet<N - 1> r;
  const auto& lo = detail::kLayout<N - 1>;
  for (int k = 0; k < Jet<N - 1>::size; ++k) {
    auto e = lo.exponents[k];
    const double scale = static_cast<double>(e[axis] + 1);
    e[axis] += 1;
    r.coeff_ref(k) = scale * j.coeff(e[0], e[1], e[2]);
  }
  return r;
}

/// f(u) for a univariate f whose derivatives at u.value() are derivs[0..N].
template <int N>
constexpr Jet<N> compose(const Jet<N>& u, const std::array<double, N + 1>& derivs) {
  Jet<N> du = u;
  du.coeff_ref(0) = 0.0;
  Jet<N> result = Jet<N>::constant(derivs[0]);
  Jet<N> power = Jet<N>::constant(1.0);
  double factorial = 1.0;
  for (int n = 1; n <= N; ++n) {
    power = power * du;
    factorial *= n;
    result += power * (derivs[n] / factorial);
  }
  return result;
}

template <int N>
Jet<N> reciprocal(const Jet<N>& u) {
  std::array<double, N + 1> d{};
  const double x = u.value();
  double term = 1.0 / x;
  for (int n = 0; n <= N; ++n) {
    d[n] = term;
    term *= -(n + 1) / x;
  }
  return compose(u, d);
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  return a * reciprocal(b);
}
template <int N>
Jet<N> operator/(const Jet<N>& a, double s) {
  return a * (1.0 / s);
}
template <int N>
Jet<N> operator/(double s, const Jet<N>& b) {
  return reciprocal(b) * s;
}

template <int N>
Jet<N> exp(const Jet<N>& u) {
  std::array<double, N + 1> d;
  d.fill(std::exp(u.value()));
  return compose(u, d);
}

template <int N>
Jet<N> log(const Jet<N>& u) {
  std::array<double, N + 1> d{};
  const double x = u.value();
  d[0] = std::log(x);
  double term = 1.0 / x;
  for (int n = 1; n <= N; ++n) {
    d[n] = term;
    term *= -n / x;
  }
  return compose(u, d);
}

template <int N>
Jet<N> sqrt(const Jet<N>& u) {
  std::array<double, N + 1> d{};
  const double x = u.value();
  double coef = 1.0;
  double p = 0.5;
  for (int n = 0; n <= N; ++n) {
    d[n] = coef * std::pow(x, p);
    coef *= p;
    p -= 1.0;
  }
  return compose(u, d);
}

namespace detail {
// Derivatives of a function whose derivative sequence cycles with period 4
// (sin, cos) or 2 (sinh, cosh), starting from the pair (f, f').
template <int N>
std::array<double, N + 1> cyclic(double f, double df, double sign) {
  std::array<double, N + 1> d{};
  for (int n = 0; n <= N; ++n) {
    const int m = n % 4;
    const double s = (m >= 2) ? sign : 1.0;
    d[n] = s * ((m % 2 == 0) ? f : df);
  }
  return d;
}
}  // namespace detail

template <int N>
Jet<N> sin(const Jet<N>& u) {
  return compose(u, detail::cyclic<N>(std::sin(u.value()), std::cos(u.value()), -1.0));
}
template <int N>
Jet<N> cos(const Jet<N>& u) {
  return compose(u, detail::cyclic<N>(std::cos(u.value()), -std::sin(u.value()), -1.0));
}
template <int N>
Jet<N> sinh(const Jet<N>& u) {
  return compose(u, detail::cyclic<N>(std::sinh(u.value()), std::cosh(u.value()), 1.0));
}
template <int N>
Jet<N> cosh(const Jet<N>& u) {
  return compose(u, detail::cyclic<N>(std::cosh(u.value()), std::sinh(u.value()), 1.0));
}

template <int N>
Jet<N> tanh(const Jet<N>& u) {
  // d^n/du^n tanh = P_n(t) with P_0 = t and P_{n+1} = (1 - t^2) P_n'(t).
  const double t = std::tanh(u.value());
  std::array<double, N + 2> poly{};  // coefficients in t, degree <= n + 1
  poly[1] = 1.0;
  std::array<double, N + 1> d{};
  for (int n = 0; n <= N; ++n) {
    double v = 0.0;
    for (int k = N + 1; k >= 0; --k) v = v * t + poly[k];
    d[n] = v;
    std::array<double, N + 2> deriv{};
    for (int k = 1; k <= N + 1; ++k) deriv[k - 1] = k * poly[k];
    std::array<double, N + 2> next{};
    for (int k = 0; k <= N + 1; ++k) {
      next[k] += deriv[k];
      if (k + 2 <= N + 1) next[k + 2] -= deriv[k];
    }
    poly = next;
  }
  return compose(u, d);
}

/// Integer power by repeated multiplication; negative exponents go through
/// the reciprocal of the positive power.
template <int N>
Jet<N> ipow(const Jet<N>& base, int exponent) {
  if (exponent < 0) return reciprocal(ipow(base, -exponent));
  Jet<N> result = Jet<N>::constant(1.0);
  for (int i = 0; i < exponent; ++i) result = result * base;
  return result;
}

}  // namespace bihar
