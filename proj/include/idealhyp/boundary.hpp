#pragma once

// Boundary data of a solved structure: edge lengths (modulo one constant per
// vertex, i.e. modulo the horosphere choice), shifts across boundary edges,
// and the linear bijection between the two.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "idealhyp/cellulation.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/geom.hpp"
#include "idealhyp/solver.hpp"

namespace idealhyp {

inline constexpr double kShiftCompletenessTolerance = 1e-9;

/// Move vectors of the vertices: m_v[e] = number of ends of edge e at v.
/// Adding t * m_v to a length vector is the effect of shrinking the
/// horosphere at v by e^t.
inline Eigen::MatrixXd vertex_moves(const Cellulation& cell) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(cell.num_vertices(), cell.num_edges());
  for (int e = 0; e < cell.num_edges(); ++e) {
    M(cell.edge(e).tail, e) += 1.0;
    M(cell.edge(e).head, e) += 1.0;
  }
  return M;
}

/// Edge lengths modulo per-vertex constants.  `lengths` is indexed by the
/// edges of the cellulation it refers to.
struct LengthClass {
  std::vector<double> lengths;

  /// Representative orthogonal to all vertex moves.
  LengthClass canonical(const Cellulation& cell) const {
    if (static_cast<int>(lengths.size()) != cell.num_edges()) throw DomainError("LengthClass: size mismatch");
    const Eigen::MatrixXd M = vertex_moves(cell);
    Eigen::VectorXd L = Eigen::Map<const Eigen::VectorXd>(lengths.data(), static_cast<Eigen::Index>(lengths.size()));
    const Eigen::VectorXd coef = (M * M.transpose()).completeOrthogonalDecomposition().solve(M * L);
    L -= M.transpose() * coef;
    return LengthClass{{L.data(), L.data() + L.size()}};
  }

  /// Largest difference between canonical representatives.
  static double distance(const Cellulation& cell, const LengthClass& a, const LengthClass& b) {
    const auto ca = a.canonical(cell), cb = b.canonical(cell);
    double d = 0.0;
    for (std::size_t i = 0; i < ca.lengths.size(); ++i) d = std::max(d, std::abs(ca.lengths[i] - cb.lengths[i]));
    return d;
  }
};

struct ShiftVector {
  std::vector<double> shifts;

  /// Sum of the shifts of the edges at each vertex (an edge with both ends
  /// at v counts twice).
  std::vector<double> vertex_sums(const Cellulation& cell) const {
    if (static_cast<int>(shifts.size()) != cell.num_edges()) throw DomainError("ShiftVector: size mismatch");
    std::vector<double> s(cell.num_vertices(), 0.0);
    for (int e = 0; e < cell.num_edges(); ++e) {
      s[cell.edge(e).tail] += shifts[e];
      s[cell.edge(e).head] += shifts[e];
    }
    return s;
  }

  bool complete(const Cellulation& cell, double tol = kShiftCompletenessTolerance) const {
    for (double v : vertex_sums(cell)) {
      if (std::abs(v) > tol) return false;
    }
    return true;
  }
};

/// Shift of a quadrilateral 1234 across its diagonal 13, from the lengths
/// of its sides: 2 delta = l12 - l23 + l34 - l41.
inline double quad_shift(double l12, double l23, double l34, double l41) { return 0.5 * (l12 - l23 + l34 - l41); }

namespace detail {

// For edge e = (p -> q) with left triangle (p, q, r) and right triangle
// (q, p, s): the four vertices and the four side edges
// (ps, sq, qr, rp), the quadrilateral p s q r.
struct EdgeQuad {
  int p, q, r, s;
  int ps, sq, qr, rp;
};

inline EdgeQuad edge_quad(const Cellulation& cell, int e) {
  const CellEdge& E = cell.edge(e);
  auto tri = [&](int f) {
    if (cell.face(f).size() != 3) {
      throw DomainError("shift: boundary face " + std::to_string(f) + " is not a triangle; subdivide it first");
    }
  };
  tri(E.left);
  tri(E.right);
  const auto& L = cell.face(E.left);
  const auto& Le = cell.face_edges(E.left);
  const auto& R = cell.face(E.right);
  const auto& Re = cell.face_edges(E.right);
  const int lp = E.left_pos, rp = E.right_pos;
  // left face: L[lp] = p, L[lp+1] = q, L[lp+2] = r; sides qr = Le[lp+1], rp = Le[lp+2]
  // right face: R[rp] = q, R[rp+1] = p, R[rp+2] = s; sides ps = Re[rp+1], sq = Re[rp+2]
  EdgeQuad g{};
  g.p = L[lp];
  g.q = L[(lp + 1) % 3];
  g.r = L[(lp + 2) % 3];
  g.s = R[(rp + 2) % 3];
  g.qr = Le[(lp + 1) % 3];
  g.rp = Le[(lp + 2) % 3];
  g.ps = Re[(rp + 1) % 3];
  g.sq = Re[(rp + 2) % 3];
  if (g.p != E.tail || g.q != E.head || R[rp] != g.q || R[(rp + 1) % 3] != g.p) {
    throw InternalError("shift: inconsistent edge/face incidence");
  }
  return g;
}

// Linear map lengths -> shifts.
inline Eigen::MatrixXd shift_matrix(const Cellulation& cell) {
  const int ne = cell.num_edges();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(ne, ne);
  for (int e = 0; e < ne; ++e) {
    const EdgeQuad g = edge_quad(cell, e);
    S(e, g.ps) += 0.5;
    S(e, g.sq) -= 0.5;
    S(e, g.qr) += 0.5;
    S(e, g.rp) -= 0.5;
  }
  return S;
}

}  // namespace detail

/// Shifts determined by edge lengths (well defined on length classes).
inline ShiftVector lengths_to_shifts(const Cellulation& cell, const LengthClass& L) {
  if (static_cast<int>(L.lengths.size()) != cell.num_edges()) throw DomainError("lengths_to_shifts: size mismatch");
  ShiftVector out;
  for (int e = 0; e < cell.num_edges(); ++e) {
    const auto g = detail::edge_quad(cell, e);
    out.shifts.push_back(quad_shift(L.lengths[g.ps], L.lengths[g.sq], L.lengths[g.qr], L.lengths[g.rp]));
  }
  return out;
}

/// Inverse of lengths_to_shifts on complete shift vectors.
inline LengthClass shifts_to_lengths(const Cellulation& cell, const ShiftVector& sh) {
  if (!sh.complete(cell)) throw DomainError("shifts_to_lengths: shift vector is not complete (nonzero vertex sums)");
  const Eigen::MatrixXd S = detail::shift_matrix(cell);
  const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sh.shifts.data(), static_cast<Eigen::Index>(sh.shifts.size()));
  const Eigen::VectorXd L = S.completeOrthogonalDecomposition().solve(s);
  const double resid = (S * L - s).cwiseAbs().maxCoeff();
  if (resid > 1e-9 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw InternalError("shifts_to_lengths: complete shift vector outside the image (residual " + std::to_string(resid) + ")");
  }
  return LengthClass{{L.data(), L.data() + L.size()}}.canonical(cell);
}

/// Shifts of the developed boundary: for each boundary edge p -> q with
/// third vertices r (left) and s (right), log|s'/r'| where ' is any Moebius
/// map sending p to 0 and q to infinity.
inline ShiftVector boundary_shifts(const IdealComplex& c, const DevelopedComplex& d) {
  const Cellulation& cell = c.boundary();
  if (static_cast<int>(d.vertices.size()) != cell.num_vertices()) throw DomainError("boundary_shifts: size mismatch");
  ShiftVector out;
  for (int e = 0; e < cell.num_edges(); ++e) {
    const auto g = detail::edge_quad(cell, e);
    const ProjPoint &P = d.vertices[g.p], &Q = d.vertices[g.q];
    auto coord = [&](const ProjPoint& w) { return std::abs(bracket(w, P)) / std::abs(bracket(w, Q)); };
    out.shifts.push_back(std::log(coord(d.vertices[g.s]) / coord(d.vertices[g.r])));
  }
  return out;
}

/// Signed lengths of the boundary edges of a developed complex between the
/// horospheres with the given decorations (one per vertex class).
inline LengthClass measured_lengths(const IdealComplex& c, const DevelopedComplex& d, const std::vector<double>& decoration) {
  const Cellulation& cell = c.boundary();
  if (static_cast<int>(decoration.size()) != cell.num_vertices()) throw DomainError("measured_lengths: size mismatch");
  LengthClass L;
  for (int e = 0; e < cell.num_edges(); ++e) {
    const int a = cell.edge(e).tail, b = cell.edge(e).head;
    L.lengths.push_back(horo_length(d.vertices[a], decoration[a], d.vertices[b], decoration[b]));
  }
  return L;
}

/// Boundary edge lengths from the Schlaefli formula: the derivative of the
/// maximal volume with respect to the dihedral angle at boundary edge e is
/// -L_e / 2.  The derivative is the Lagrange multiplier of the edge-total
/// constraint at the optimum; multipliers are defined up to the left null
/// space of the constraints, which moves boundary lengths by vertex moves.
inline LengthClass lengths_from_schlafli(const IdealComplex& c, const SolvedStructure& s) {
  if (s.status != SolveStatus::Converged) throw UnsupportedTopologyError("lengths_from_schlafli: structure not converged");
  AngleTarget dummy;
  dummy.totals.assign(c.num_edges(), 0.0);
  const AngleConstraints k = angle_constraints(c, dummy);
  const int n = static_cast<int>(k.A.cols());
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g[i] = lobachevsky_deriv(s.angles[i]);
  const Eigen::VectorXd y = k.A.transpose().completeOrthogonalDecomposition().solve(g);
  LengthClass L;
  for (int e : c.boundary_edges()) L.lengths.push_back(-2.0 * y[c.num_tets() + e]);
  return L.canonical(c.boundary());
}

}  // namespace idealhyp
