#pragma once

// Volume maximisation over angle assignments with prescribed edge totals.
// The critical point is the smooth structure: all interior shears vanish.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "idealhyp/angles.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/geom.hpp"
#include "idealhyp/loba.hpp"
#include "idealhyp/lp.hpp"

namespace idealhyp {

/// Sum of the volumes of the tets.
inline double total_volume(const IdealComplex& c, const AngleAssignment& a) {
  if (a.size() != c.num_tets()) throw DomainError("total_volume: assignment size mismatch");
  double v = 0.0;
  for (const auto& t : a.tets) v += tet_volume(t);
  return v;
}

/// For each interior edge (in the order of c.interior_edges()), the sum of
/// the shears of the incident tets.  Zero at all interior edges (together
/// with totals 2 pi) is the condition for the tets to glue up smoothly.
inline std::vector<double> interior_shear_residuals(const IdealComplex& c, const AngleAssignment& a) {
  if (a.size() != c.num_tets()) throw DomainError("interior_shear_residuals: assignment size mismatch");
  std::vector<double> r;
  r.reserve(c.interior_edges().size());
  for (int e : c.interior_edges()) {
    double s = 0.0;
    for (const auto& slot : c.edge(e).slots) s += shear_at_edge(a.tets[slot.tet], slot.edge());
    r.push_back(s);
  }
  return r;
}

struct SolveOptions {
  int max_iters = 200;
  double grad_tol = 1e-10;
  double shear_tol = 1e-8;
  double min_angle_guard = 1e-8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double boundary_fraction = 0.99;  // fraction-to-boundary step rule
  double degenerate_threshold = 1e-6;
  int circuit_max_len = kDefaultCircuitMaxLen;
  int threads = 1;
  /// Optional starting point (3 angles per tet); must satisfy the constraints.
  std::vector<double> start;
  /// Called after every accepted iterate with (iteration, angles, volume,
  /// projected gradient norm).
  std::function<void(int, const std::vector<double>&, double, double)> on_iterate;
};

enum class SolveStatus { Converged, Degenerate, IterLimit };

enum class DegenerateReason { None, CollapsedSimplex, BoundaryAngle, CircuitSum };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Degenerate: return "Degenerate";
    case SolveStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

/// Taxonomy letter: (a) simplex angle -> 0, (b) boundary dihedral -> 0 or pi,
/// (c) circuit sum -> 2 pi.
inline const char* to_string(DegenerateReason r) {
  switch (r) {
    case DegenerateReason::None: return "none";
    case DegenerateReason::CollapsedSimplex: return "a";
    case DegenerateReason::BoundaryAngle: return "b";
    case DegenerateReason::CircuitSum: return "c";
  }
  return "?";
}

struct Degeneracy {
  DegenerateReason reason = DegenerateReason::None;
  std::string detail;
  std::vector<int> circuit;       // edge classes of the circuit, for (c)
  double circuit_sum = 0.0;       // exterior angle sum along it
  std::vector<int> edges;         // boundary edge classes, for (b)
  std::vector<std::pair<int, int>> slots;  // (tet, angle index) collapsing, for (a)
};

struct SolvedStructure {
  SolveStatus status = SolveStatus::IterLimit;
  AngleAssignment assignment;  // empty if no strictly positive point exists
  std::vector<double> angles;  // raw 3 per tet
  double volume = 0.0;
  std::vector<double> interior_shear_residuals;
  double max_shear_residual = 0.0;
  double gradient_norm = 0.0;  // projected gradient
  double max_total_error = 0.0;
  int iterations = 0;
  Degeneracy degeneracy;
  std::vector<std::string> diagnostics;
};

/// Linear constraints on the 3T angles: one row per tet (sum pi) followed by
/// one row per edge class (total = target).
struct AngleConstraints {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<std::string> row_names;
};

inline AngleConstraints angle_constraints(const IdealComplex& c, const AngleTarget& t) {
  const int T = c.num_tets(), E = c.num_edges();
  if (static_cast<int>(t.totals.size()) != E) throw DomainError("angle_constraints: target size mismatch");
  AngleConstraints k;
  k.A = Eigen::MatrixXd::Zero(T + E, 3 * T);
  k.b = Eigen::VectorXd::Zero(T + E);
  for (int i = 0; i < T; ++i) {
    k.A.block(i, 3 * i, 1, 3).setOnes();
    k.b[i] = kPi;
    k.row_names.push_back("tet " + std::to_string(i) + " angle sum = pi");
  }
  for (int e = 0; e < E; ++e) {
    for (const auto& s : c.edge(e).slots) k.A(T + e, 3 * s.tet + angle_class(s.edge())) += 1.0;
    k.b[T + e] = t.totals[e];
    std::ostringstream os;
    os.precision(17);
    os << (c.edge(e).boundary ? "boundary" : "interior") << " edge " << e << " total = " << t.totals[e];
    k.row_names.push_back(os.str());
  }
  return k;
}

/// Orthonormal basis of the null space of A (columns), and its rank.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double rel_tol = 1e-10) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * std::max(1.0, smax)) ++rank;
  }
  return svd.matrixV().rightCols(A.cols() - rank);
}

/// Maximises the smallest angle over the constraint polytope.
struct MaxMinStart {
  std::vector<double> angles;
  double min_angle = 0.0;
};

inline MaxMinStart max_min_start(const IdealComplex& c, const AngleTarget& t) {
  const AngleConstraints k = angle_constraints(c, t);
  const int n = static_cast<int>(k.A.cols()), m = static_cast<int>(k.A.rows());
  // variables (s, tau): A (s + tau 1) = b, s >= 0, tau >= 0, maximise tau
  Eigen::MatrixXd A(m, n + 1);
  A.leftCols(n) = k.A;
  A.col(n) = k.A.rowwise().sum();
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(n + 1);
  obj[n] = 1.0;
  const LpResult r = solve_lp(A, k.b, obj);
  if (r.status == LpStatus::Infeasible) {
    std::vector<std::string> cert;
    const double ymax = r.farkas.cwiseAbs().maxCoeff();
    for (int i = 0; i < m; ++i) {
      if (std::abs(r.farkas[i]) > 1e-9 * std::max(1.0, ymax)) {
        std::ostringstream os;
        os.precision(6);
        os << r.farkas[i] << " * [" << k.row_names[i] << "]";
        cert.push_back(os.str());
      }
    }
    throw InfeasibleError("no angle assignment meets the tet sums and edge totals", cert);
  }
  if (r.status != LpStatus::Optimal) throw InternalError("max_min_start: LP unbounded");
  MaxMinStart out;
  out.min_angle = r.x[n];
  Eigen::VectorXd x = r.x.head(n).array() + r.x[n];
  // remove rounding drift off the affine constraint space
  const Eigen::VectorXd resid = k.b - k.A * x;
  x += k.A.transpose() * (k.A * k.A.transpose()).completeOrthogonalDecomposition().solve(resid);
  out.angles.assign(x.data(), x.data() + n);
  return out;
}

inline AngleAssignment assignment_from_vector(const std::vector<double>& x) {
  if (x.size() % 3 != 0) throw DomainError("assignment_from_vector: size not a multiple of 3");
  AngleAssignment a;
  for (std::size_t i = 0; i < x.size(); i += 3) a.tets.push_back(TetAngles::make(x[i], x[i + 1], x[i + 2]));
  return a;
}

inline std::vector<double> vector_from_assignment(const AngleAssignment& a) {
  std::vector<double> x;
  for (const auto& t : a.tets) x.insert(x.end(), {t.alpha, t.beta, t.gamma});
  return x;
}

/// A strictly positive assignment meeting the constraints, maximising the
/// smallest angle.
inline AngleAssignment feasible_start(const IdealComplex& c, const AngleTarget& t) {
  const MaxMinStart s = max_min_start(c, t);
  if (!(s.min_angle > 0.0)) {
    throw InfeasibleError("the constraint polytope has no interior point (largest possible smallest angle is 0)",
                          {"the targets force some tet angle to vanish"});
  }
  return assignment_from_vector(s.angles);
}

/// Random strictly feasible point: the max-min point moved a random fraction
/// of the way to the polytope boundary along a random tangent direction.
template <class Rng>
std::vector<double> random_feasible_point(const IdealComplex& c, const AngleTarget& t, Rng& rng,
                                          double guard = 1e-3) {
  const MaxMinStart s = max_min_start(c, t);
  if (!(s.min_angle > guard)) throw InfeasibleError("random_feasible_point: polytope too thin", {});
  const AngleConstraints k = angle_constraints(c, t);
  const Eigen::MatrixXd N = null_space(k.A);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(s.angles.data(), static_cast<Eigen::Index>(s.angles.size()));
  if (N.cols() == 0) return s.angles;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  Eigen::VectorXd r(N.cols());
  for (int i = 0; i < r.size(); ++i) r[i] = gauss(rng);
  const Eigen::VectorXd d = N * r;
  double amax = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i) {
    if (d[i] < 0) amax = std::min(amax, (x[i] - guard) / -d[i]);
    if (d[i] > 0) amax = std::min(amax, (kPi - guard - x[i]) / d[i]);
  }
  x += unif(rng) * amax * d;
  return {x.data(), x.data() + x.size()};
}

namespace detail {

inline int default_threads() {
  if (const char* env = std::getenv("IDEALHYP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Evaluates f(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (int i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Evaluation {
  double volume = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd hess_diag;
};

inline Evaluation evaluate(const Eigen::VectorXd& x, int threads) {
  const int T = static_cast<int>(x.size()) / 3;
  Evaluation ev;
  ev.grad.resize(x.size());
  ev.hess_diag.resize(x.size());
  std::vector<double> vol(T);
  parallel_for(T, threads, [&](int t) {
    const TetAngles a{x[3 * t], x[3 * t + 1], x[3 * t + 2]};
    const auto d = tet_volume_grad_hess(a);
    vol[t] = tet_volume(a);
    for (int k = 0; k < 3; ++k) {
      ev.grad[3 * t + k] = d.gradient[k];
      ev.hess_diag[3 * t + k] = d.hessian[k][k];
    }
  });
  for (double v : vol) ev.volume += v;
  return ev;
}

inline double volume_only(const Eigen::VectorXd& x) {
  double v = 0.0;
  for (int i = 0; i < x.size(); ++i) v += lobachevsky(x[i]);
  return v;
}

}  // namespace detail

/// Classifies why the constrained maximum sits on the boundary of the
/// angle polytope.
inline Degeneracy classify_degeneracy(const IdealComplex& c, const AngleTarget& t, const std::vector<double>& x,
                                      const SolveOptions& opts) {
  Degeneracy d;
  const double thr = opts.degenerate_threshold;
  // (c) a non-elementary circuit whose exterior angles add up to 2 pi
  if (c.boundary().num_faces() > 0) {
    try {
      const DihedralData dd = dihedral_data_from_totals(c, t.totals);
      const auto circuits = enumerate_circuits(dd.cells, opts.circuit_max_len, dd.cells.is_sphere(), {});
      double best = std::numeric_limits<double>::infinity();
      for (const auto& circ : circuits.circuits) {
        if (circ.kind == CircuitKind::Elementary) continue;
        double sum = 0.0;
        for (int e : circ.edges) sum += dd.w[e];
        if (std::abs(sum - 2 * kPi) <= thr && std::abs(sum - 2 * kPi) < best) {
          best = std::abs(sum - 2 * kPi);
          d.reason = DegenerateReason::CircuitSum;
          d.circuit.clear();
          for (int e : circ.edges) d.circuit.push_back(dd.source_edge[e]);
          d.circuit_sum = sum;
        }
      }
      if (d.reason == DegenerateReason::CircuitSum) {
        std::ostringstream os;
        os << "circuit through edge classes {";
        for (std::size_t i = 0; i < d.circuit.size(); ++i) os << (i ? "," : "") << d.circuit[i];
        os.precision(12);
        os << "} has exterior angle sum " << d.circuit_sum << " (2 pi = " << 2 * kPi << ")";
        d.detail = os.str();
        return d;
      }
    } catch (const ValidationError&) {
      // cellulation not usable for circuit analysis; fall through
    }
  }
  // (b) boundary dihedral angles at 0 or pi (flat edges excluded)
  for (int e : c.boundary_edges()) {
    const double v = t.totals[e];
    if (v <= thr || (v >= kPi - thr && std::abs(v - kPi) > 1e-12)) d.edges.push_back(e);
  }
  if (!d.edges.empty()) {
    d.reason = DegenerateReason::BoundaryAngle;
    d.detail = std::to_string(d.edges.size()) + " boundary edge(s) with target dihedral angle at 0 or pi";
    return d;
  }
  // (a) collapsing simplex angles
  d.reason = DegenerateReason::CollapsedSimplex;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= std::max(thr, opts.min_angle_guard + thr)) d.slots.push_back({static_cast<int>(i / 3), static_cast<int>(i % 3)});
  }
  d.detail = std::to_string(d.slots.size()) + " tet angle(s) collapse to 0";
  return d;
}

/// Maximises the total volume over assignments with the prescribed totals
/// by a projected Newton method on the tangent space of the constraints.
inline SolvedStructure solve_structure(const IdealComplex& c, const AngleTarget& t, SolveOptions opts = {}) {
  if (!(opts.grad_tol > 0 && opts.shear_tol > 0 && opts.min_angle_guard > 0 && opts.max_iters >= 0)) {
    throw DomainError("solve_structure: tolerances must be positive");
  }
  if (opts.threads <= 0) opts.threads = detail::default_threads();
  const AngleConstraints k = angle_constraints(c, t);
  const int n = static_cast<int>(k.A.cols());
  SolvedStructure out;

  Eigen::VectorXd x(n);
  if (!opts.start.empty()) {
    if (static_cast<int>(opts.start.size()) != n) throw DomainError("solve_structure: start has wrong size");
    x = Eigen::Map<const Eigen::VectorXd>(opts.start.data(), n);
    if ((k.A * x - k.b).cwiseAbs().maxCoeff() > 1e-9) throw DomainError("solve_structure: start violates constraints");
  } else {
    const MaxMinStart s = max_min_start(c, t);
    x = Eigen::Map<const Eigen::VectorXd>(s.angles.data(), n);
    if (s.min_angle < opts.degenerate_threshold) {
      out.status = SolveStatus::Degenerate;
      out.angles = s.angles;
      out.degeneracy = classify_degeneracy(c, t, s.angles, opts);
      out.volume = detail::volume_only(x.cwiseMax(0.0));
      out.diagnostics.push_back("constraint polytope has empty interior (max-min angle " + std::to_string(s.min_angle) +
                                ")");
      return out;
    }
  }
  const double lo = opts.min_angle_guard, hi = kPi - opts.min_angle_guard;
  if (x.minCoeff() < lo || x.maxCoeff() > hi) throw DomainError("solve_structure: start outside the angle guard");

  const Eigen::MatrixXd N = null_space(k.A);
  auto finish = [&](SolveStatus st, const detail::Evaluation& ev, double gnorm) {
    out.status = st;
    out.angles.assign(x.data(), x.data() + n);
    out.volume = ev.volume;
    out.gradient_norm = gnorm;
    out.max_total_error = (k.A * x - k.b).cwiseAbs().maxCoeff();
    bool valid = true;
    for (int i = 0; i < n; ++i) valid = valid && x[i] > 0 && x[i] < kPi;
    if (valid) {
      for (int tt = 0; tt < n / 3; ++tt) {
        // absorb rounding in the tet sum into the largest angle
        double a[3] = {x[3 * tt], x[3 * tt + 1], x[3 * tt + 2]};
        const int big = static_cast<int>(std::max_element(a, a + 3) - a);
        a[big] = kPi - (a[(big + 1) % 3] + a[(big + 2) % 3]);
        out.assignment.tets.push_back(TetAngles::make(a[0], a[1], a[2]));
      }
      out.interior_shear_residuals = interior_shear_residuals(c, out.assignment);
      out.max_shear_residual = 0.0;
      for (double r : out.interior_shear_residuals) out.max_shear_residual = std::max(out.max_shear_residual, std::abs(r));
    }
  };

  if (N.cols() == 0) {
    // the constraints pin the point down
    const auto ev = detail::evaluate(x, opts.threads);
    finish(SolveStatus::Converged, ev, 0.0);
    if (out.max_shear_residual > opts.shear_tol) out.status = SolveStatus::IterLimit;
    return out;
  }

  detail::Evaluation ev = detail::evaluate(x, opts.threads);
  double gnorm = (N.transpose() * ev.grad).norm();
  for (int it = 0; it < opts.max_iters; ++it) {
    out.iterations = it;
    if (gnorm <= opts.grad_tol) break;
    const Eigen::VectorXd gr = N.transpose() * ev.grad;
    const Eigen::MatrixXd Hr = N.transpose() * ev.hess_diag.asDiagonal() * N;
    Eigen::LLT<Eigen::MatrixXd> llt(-Hr);
    if (llt.info() != Eigen::Success) {
      throw InternalError("solve_structure: reduced Hessian is not negative definite (concavity violated)");
    }
    const Eigen::VectorXd d = N * llt.solve(gr);  // ascent direction
    double amax = 1.0;
    for (int i = 0; i < n; ++i) {
      if (d[i] < 0) amax = std::min(amax, opts.boundary_fraction * (x[i] - lo) / -d[i]);
      if (d[i] > 0) amax = std::min(amax, opts.boundary_fraction * (hi - x[i]) / d[i]);
    }
    const double slope = ev.grad.dot(d);
    double step = amax;
    Eigen::VectorXd xn;
    double vn = 0.0;
    bool accepted = false;
    // below this predicted gain the volume difference is rounding noise, so
    // the step is judged by the projected gradient instead
    const double noise = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ev.volume));
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * d;
      if (step * slope < noise) {
        if ((N.transpose() * detail::evaluate(xn, opts.threads).grad).norm() < gnorm) {
          accepted = true;
          break;
        }
        step *= opts.backtrack;
        continue;
      }
      vn = detail::volume_only(xn);
      if (vn >= ev.volume + opts.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      // no measurable increase left; this is the floating point limit
      out.diagnostics.push_back("line search stalled at iteration " + std::to_string(it));
      break;
    }
    // re-project onto the affine constraint space
    xn += k.A.transpose() * (k.A * k.A.transpose()).completeOrthogonalDecomposition().solve(k.b - k.A * xn);
    x = xn;
    ev = detail::evaluate(x, opts.threads);
    gnorm = (N.transpose() * ev.grad).norm();
    out.iterations = it + 1;
    if (opts.on_iterate) opts.on_iterate(it + 1, std::vector<double>(x.data(), x.data() + n), ev.volume, gnorm);
    if (x.minCoeff() <= lo * (1 + 1e-3) + opts.degenerate_threshold && amax < 1.0 && step == amax) {
      // iterates are being pushed into the guard
      if (x.minCoeff() < opts.degenerate_threshold) {
        finish(SolveStatus::Degenerate, ev, gnorm);
        out.degeneracy = classify_degeneracy(c, t, out.angles, opts);
        return out;
      }
    }
  }
  if (gnorm <= opts.grad_tol) {
    finish(SolveStatus::Converged, ev, gnorm);
    if (out.max_shear_residual > opts.shear_tol) {
      out.status = SolveStatus::IterLimit;
      out.diagnostics.push_back("projected gradient vanished but shear residual is above tolerance");
    }
    return out;
  }
  finish(SolveStatus::IterLimit, ev, gnorm);
  if (x.minCoeff() < opts.degenerate_threshold) {
    out.status = SolveStatus::Degenerate;
    out.degeneracy = classify_degeneracy(c, t, out.angles, opts);
  }
  return out;
}

/// Projected gradient of the total volume at an assignment (for tests).
inline double projected_gradient_norm(const IdealComplex& c, const AngleTarget& t, const AngleAssignment& a) {
  const AngleConstraints k = angle_constraints(c, t);
  const Eigen::MatrixXd N = null_space(k.A);
  const auto x = vector_from_assignment(a);
  const auto ev = detail::evaluate(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())), 1);
  return (N.transpose() * ev.grad).norm();
}

}  // namespace idealhyp
