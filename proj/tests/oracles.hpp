#pragma once

// Reference computations used to check the library.  They share no code
// with the routines under test beyond the complex combinatorics.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "idealhyp/complex.hpp"
#include "idealhyp/loba.hpp"
#include "idealhyp/predicates.hpp"

namespace oracle {

using idealhyp::kPi;

// -int_0^x log|2 sin t| dt.  The range is cut at multiples of pi and each
// piece [k pi, k pi + d] is integrated as -int_0^d log(2 sin s) ds, whose
// singularities sit at the endpoints.  The complement argument of the
// two-argument integrand keeps s near pi accurate.
inline double loba_quadrature(double x) {
  static boost::math::quadrature::tanh_sinh<double> integrator;
  const double sign = x < 0 ? -1.0 : 1.0;
  const double ax = std::abs(x);
  double total = 0.0;
  for (double a = 0.0; a < ax; a += kPi) {
    const double d = std::min(kPi, ax - a);
    if (d < 1e-3) {
      // -log(2s) integrated exactly, plus the smooth remainder to O(d^3)
      total += -d * (std::log(2 * d) - 1) + d * d * d / 18;
      continue;
    }
    auto f = [d](double s, double sc) {
      const double arg = (d == kPi && sc > 0) ? sc : s;
      return -std::log(2.0 * std::sin(arg));
    };
    total += integrator.integrate(f, 0.0, d);
  }
  // the integrand is even, so the integral from 0 is odd in x
  return sign * total;
}

inline double det3(const idealhyp::Point3& a, const idealhyp::Point3& b, const idealhyp::Point3& c,
                   const idealhyp::Point3& d) {
  const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double w[3] = {d[0] - a[0], d[1] - a[1], d[2] - a[2]};
  return u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0]);
}

using Tri = std::array<int, 3>;

// Triples with an empty circumscribed cap: the plane through them has every
// other point strictly on one side.  All pairs of (triple, point) are tried.
inline std::set<Tri> empty_cap_triples(const std::vector<idealhyp::Point3>& pts) {
  const int n = static_cast<int>(pts.size());
  std::set<Tri> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        int pos = 0, neg = 0;
        for (int m = 0; m < n; ++m) {
          if (m == i || m == j || m == k) continue;
          const double s = det3(pts[i], pts[j], pts[k], pts[m]);
          pos += s > 0;
          neg += s <= 0;
        }
        if (pos == 0 || neg == 0) out.insert({i, j, k});
      }
    }
  }
  return out;
}

// |z| from the Euclidean triangle with angles alpha at 0 and beta at 1,
// located by intersecting the two rays.
inline double apex_distance(double alpha, double beta) {
  // apex = t e^{i alpha} = 1 + s e^{i (pi - beta)}
  const std::complex<double> u = std::polar(1.0, alpha), v = std::polar(1.0, kPi - beta);
  const double det = -u.real() * v.imag() + u.imag() * v.real();
  return -v.imag() / det;
}

// Sum of signed feet distances around each interior edge.
inline std::vector<double> shear_residuals(const idealhyp::IdealComplex& c, const std::vector<double>& x) {
  std::vector<double> out;
  for (int e : c.interior_edges()) {
    double s = 0.0;
    for (const auto& slot : c.edge(e).slots) {
      const int k = idealhyp::angle_class(slot.edge());
      const double* a = &x[3 * slot.tet];
      s += std::log(apex_distance(a[k], a[(k + 1) % 3]));
    }
    out.push_back(s);
  }
  return out;
}

// Gradient of sum Lambda(theta) projected onto the tangent space of the
// constraints, with the constraint matrix assembled here.
inline double projected_gradient(const idealhyp::IdealComplex& c, const std::vector<double>& x) {
  const int n = 3 * c.num_tets();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(c.num_tets() + c.num_edges(), n);
  for (int t = 0; t < c.num_tets(); ++t) A.block(t, 3 * t, 1, 3).setOnes();
  for (int e = 0; e < c.num_edges(); ++e) {
    for (const auto& slot : c.edge(e).slots) A(c.num_tets() + e, 3 * slot.tet + idealhyp::angle_class(slot.edge())) += 1.0;
  }
  const Eigen::MatrixXd K = Eigen::FullPivLU<Eigen::MatrixXd>(A).kernel();
  if (K.cols() == 0 || K.norm() == 0) return 0.0;
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(K).householderQ() * Eigen::MatrixXd::Identity(n, K.cols());
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g[i] = -std::log(2 * std::sin(x[i]));
  return (Q.transpose() * g).norm();
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace oracle
