#pragma once

// Lobachevsky function and the volume of ideal tetrahedra.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "idealhyp/errors.hpp"

namespace idealhyp {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

// zeta(2n) / (n (2n+1)) for n = 1..kLobaTerms, the coefficients of the
// expansion of the Lobachevsky function around 0 in powers of (theta/pi)^2.
inline constexpr int kLobaTerms = 40;

inline const std::array<double, kLobaTerms + 1>& loba_coefficients() {
  static const std::array<double, kLobaTerms + 1> table = [] {
    std::array<double, kLobaTerms + 1> c{};
    for (int n = 1; n <= kLobaTerms; ++n) {
      const double zeta = std::riemann_zeta(2.0 * n);
      c[n] = zeta / (n * (2.0 * n + 1.0));
    }
    return c;
  }();
  return table;
}

// Lobachevsky function on [0, pi/2].  With x = theta/pi <= 1/2 the n-th
// term is below zeta(2) * 4^-n / (2 n^2), so the tail after the last term
// used is bounded by that term divided by (1 - x^2).
inline double loba_reduced(double theta) {
  if (theta == 0.0) return 0.0;
  const auto& c = loba_coefficients();
  const double x2 = (theta / kPi) * (theta / kPi);
  double power = 1.0;
  double series = 0.0;
  for (int n = 1; n <= kLobaTerms; ++n) {
    power *= x2;
    const double term = c[n] * power;
    series += term;
    if (term < 1e-18 * (1.0 - x2)) break;
  }
  return theta * (1.0 - std::log(2.0 * theta)) + theta * series;
}

}  // namespace detail

/// Lobachevsky function  L(t) = -int_0^t log|2 sin u| du.
///
/// Odd and pi-periodic.  The argument is reduced to [0, pi/2] and evaluated
/// with the power series
///   L(t) = t (1 - log 2t) + t * sum_n zeta(2n) / (n (2n+1)) (t/pi)^(2n),
/// which converges geometrically there.  Absolute error is below 1e-14 on
/// the reduced range.
inline double lobachevsky(double theta) {
  if (!std::isfinite(theta)) throw DomainError("lobachevsky: non-finite argument");
  double r = theta - kPi * std::round(theta / kPi);  // r in [-pi/2, pi/2]
  if (r < 0.0) return -detail::loba_reduced(-r);
  return detail::loba_reduced(r);
}

/// Derivative of the Lobachevsky function, -log|2 sin t|.
inline double lobachevsky_deriv(double theta) {
  if (!std::isfinite(theta)) throw DomainError("lobachevsky_deriv: non-finite argument");
  const double r = theta - kPi * std::round(theta / kPi);
  const double s = std::sin(theta);
  if (r == 0.0 || s == 0.0) {
    throw SingularityError("lobachevsky_deriv: derivative diverges at multiples of pi");
  }
  return -std::log(2.0 * std::abs(s));
}

/// Dihedral angles of an ideal tetrahedron.  Opposite edges carry equal
/// angles, so three numbers summing to pi describe the simplex.  Index 0 is
/// the angle at tet edges (0,1),(2,3); index 1 at (0,2),(1,3); index 2 at
/// (0,3),(1,2).
struct TetAngles {
  double alpha = kPi / 3;
  double beta = kPi / 3;
  double gamma = kPi / 3;

  static constexpr double kSumTolerance = 1e-12;

  /// Validating constructor.
  static TetAngles make(double a, double b, double c) {
    TetAngles t{a, b, c};
    t.check();
    return t;
  }

  /// Builds angles (a, b, pi - a - b).
  static TetAngles from_two(double a, double b) { return make(a, b, kPi - a - b); }

  double operator[](int k) const {
    switch (k) {
      case 0: return alpha;
      case 1: return beta;
      case 2: return gamma;
      default: throw DomainError("TetAngles: index out of range");
    }
  }
  double& operator[](int k) {
    switch (k) {
      case 0: return alpha;
      case 1: return beta;
      case 2: return gamma;
      default: throw DomainError("TetAngles: index out of range");
    }
  }

  double sum() const { return alpha + beta + gamma; }

  void check() const {
    for (double v : {alpha, beta, gamma}) {
      if (!std::isfinite(v) || v <= 0.0 || v >= kPi) {
        throw DomainError("TetAngles: angle " + std::to_string(v) + " outside (0, pi)");
      }
    }
    if (std::abs(sum() - kPi) > kSumTolerance) {
      throw DomainError("TetAngles: angles sum to " + std::to_string(sum()) + ", not pi");
    }
  }

  friend bool operator==(const TetAngles&, const TetAngles&) = default;
};

/// Volume of the ideal tetrahedron: L(alpha) + L(beta) + L(gamma).
inline double tet_volume(const TetAngles& a) {
  return lobachevsky(a.alpha) + lobachevsky(a.beta) + lobachevsky(a.gamma);
}

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct VolumeDerivatives {
  Vec3 gradient{};  // -log(2 sin theta_i)
  Mat3 hessian{};   // diag(-cot theta_i)
};

/// Distance from 0 and pi below which derivative evaluation is refused.
inline constexpr double kAngleSingularityGuard = 1e-9;

/// Gradient and Hessian of tet_volume with respect to the three angles,
/// treated as independent coordinates.  Only the restriction to the plane
/// d(alpha)+d(beta)+d(gamma)=0 is negative definite.
inline VolumeDerivatives tet_volume_grad_hess(const TetAngles& a) {
  VolumeDerivatives d;
  for (int i = 0; i < 3; ++i) {
    const double t = a[i];
    if (t < kAngleSingularityGuard || t > kPi - kAngleSingularityGuard) {
      throw SingularityError("tet_volume_grad_hess: angle " + std::to_string(t) +
                             " too close to 0 or pi");
    }
    d.gradient[i] = -std::log(2.0 * std::sin(t));
    d.hessian[i][i] = -1.0 / std::tan(t);
  }
  return d;
}

/// Hessian restricted to the sum-zero plane in the orthonormal basis
/// (1,-1,0)/sqrt2, (1,1,-2)/sqrt6.
inline std::array<std::array<double, 2>, 2> restricted_hessian(const Mat3& h) {
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  const std::array<Vec3, 2> basis{{{1 / s2, -1 / s2, 0.0}, {1 / s6, 1 / s6, -2 / s6}}};
  std::array<std::array<double, 2>, 2> r{};
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) acc += basis[p][i] * h[i][j] * basis[q][j];
      }
      r[p][q] = acc;
    }
  }
  return r;
}

}  // namespace idealhyp
