#pragma once

// Piecewise affine structure on exterior-angle space: diagonal flips on
// triangulations of the sphere and their transition maps.  Everything is
// templated on the scalar so that identities can be checked exactly with
// boost::multiprecision::cpp_rational.
//
// Flip convention: for the edge e1 = (p -> q) with left triangle (p, q, r)
// and right triangle (q, p, s), the quadrilateral is (p, s, q, r) in
// counter-clockwise order.  A chart with value -2u at e1 is sent to the
// chart on the triangulation with diagonal e2 = (r, s) (stored under the
// index of e1) carrying 2u, and with u subtracted from the four sides.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "idealhyp/cellulation.hpp"
#include "idealhyp/errors.hpp"

namespace idealhyp {

using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct AngleChart {
  Cellulation cells;
  std::vector<S> w;  // exterior angle per edge

  /// Sum of the values at the edges around each vertex (an elementary
  /// circuit); loops count twice.
  std::vector<S> vertex_sums() const {
    std::vector<S> s(cells.num_vertices(), S(0));
    for (int e = 0; e < cells.num_edges(); ++e) {
      s[cells.edge(e).tail] += w[e];
      s[cells.edge(e).head] += w[e];
    }
    return s;
  }
};

/// The four sides of the quadrilateral around e1: (ps, sq, qr, rp), plus
/// its vertices.
struct FlipQuad {
  int p, q, r, s;
  int ps, sq, qr, rp;
};

inline FlipQuad flip_quad(const Cellulation& c, int e1) {
  if (e1 < 0 || e1 >= c.num_edges()) throw DomainError("flip: edge index out of range");
  const CellEdge& E = c.edge(e1);
  if (E.left == E.right) throw DomainError("flip: edge borders the same face twice");
  const auto& L = c.face(E.left);
  const auto& R = c.face(E.right);
  if (L.size() != 3 || R.size() != 3) throw DomainError("flip: both faces at the edge must be triangles");
  const auto& Le = c.face_edges(E.left);
  const auto& Re = c.face_edges(E.right);
  const int lp = E.left_pos, rp = E.right_pos;
  FlipQuad g{};
  g.p = E.tail;
  g.q = E.head;
  g.r = L[(lp + 2) % 3];
  g.s = R[(rp + 2) % 3];
  g.qr = Le[(lp + 1) % 3];
  g.rp = Le[(lp + 2) % 3];
  g.ps = Re[(rp + 1) % 3];
  g.sq = Re[(rp + 2) % 3];
  if (g.r == g.s || g.r == g.p || g.r == g.q || g.s == g.p || g.s == g.q) {
    throw DomainError("flip: quadrilateral around edge " + std::to_string(e1) + " is not embedded");
  }
  const std::array<int, 4> sides{g.ps, g.sq, g.qr, g.rp};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (sides[i] == sides[j]) throw DomainError("flip: quadrilateral around edge " + std::to_string(e1) + " is not embedded");
    }
    if (sides[i] == e1) throw DomainError("flip: quadrilateral around edge " + std::to_string(e1) + " is not embedded");
  }
  return g;
}

/// Triangulation with e1 replaced by the other diagonal of its quad.
inline Cellulation flip_cellulation(const Cellulation& c, int e1) {
  const FlipQuad g = flip_quad(c, e1);
  const CellEdge& E = c.edge(e1);
  auto faces = c.faces();
  std::vector<std::vector<int>> sides;
  for (int f = 0; f < c.num_faces(); ++f) sides.push_back(c.face_edges(f));
  faces[E.left] = {g.s, g.q, g.r};
  sides[E.left] = {g.sq, g.qr, e1};
  faces[E.right] = {g.r, g.p, g.s};
  sides[E.right] = {g.rp, g.ps, e1};
  return Cellulation::from_faces(c.num_vertices(), std::move(faces), std::move(sides));
}

namespace detail {

template <class S>
bool scalar_equal(const S& a, const S& b) {
  if constexpr (std::is_floating_point_v<S>) {
    return std::abs(a - b) <= 1e-12 * std::max<S>(S(1), std::abs(a) + std::abs(b));
  } else {
    return a == b;
  }
}

}  // namespace detail

/// Flip with the side update multipliers made explicit: side k gets
/// coeff[k] * u subtracted (the correct rule has all ones).  Exposed so that
/// tests can corrupt the rule.
template <class S>
AngleChart<S> flip_with_rule(const AngleChart<S>& chart, int e1, const S& u, const std::array<S, 4>& coeff) {
  if (static_cast<int>(chart.w.size()) != chart.cells.num_edges()) throw DomainError("flip: chart size mismatch");
  const FlipQuad g = flip_quad(chart.cells, e1);
  if (!detail::scalar_equal(chart.w[e1], S(-2) * u)) throw DomainError("flip: chart value at the edge is not -2u");
  AngleChart<S> out;
  out.cells = flip_cellulation(chart.cells, e1);
  out.w = chart.w;
  out.w[e1] = S(2) * u;
  const std::array<int, 4> sides{g.ps, g.sq, g.qr, g.rp};
  for (int k = 0; k < 4; ++k) out.w[sides[k]] -= coeff[k] * u;
  return out;
}

template <class S>
AngleChart<S> flip(const AngleChart<S>& chart, int e1, const S& u) {
  return flip_with_rule(chart, e1, u, {S(1), S(1), S(1), S(1)});
}

/// Flip with u read off the chart (u = -w(e1)/2): the transition map between
/// adjacent cells, linear in the chart values.
template <class S>
AngleChart<S> flip_at(const AngleChart<S>& chart, int e1) {
  return flip(chart, e1, -chart.w.at(e1) / S(2));
}

template <class S>
struct PreservationReport {
  std::vector<S> before, after;  // elementary circuit sums per vertex
  std::vector<S> residual;       // after - before
  bool preserved = true;
};

/// Compares every elementary circuit sum before and after a flip.  Exact
/// for rational scalars, 1e-12 for floating point.
template <class S>
PreservationReport<S> elementary_circuit_preservation(const AngleChart<S>& chart, int e1, const S& u,
                                                      const std::array<S, 4>& coeff = {S(1), S(1), S(1), S(1)}) {
  PreservationReport<S> r;
  r.before = chart.vertex_sums();
  r.after = flip_with_rule(chart, e1, u, coeff).vertex_sums();
  for (std::size_t v = 0; v < r.before.size(); ++v) {
    r.residual.push_back(r.after[v] - r.before[v]);
    if (!detail::scalar_equal(r.after[v], r.before[v])) r.preserved = false;
  }
  return r;
}

template <class S>
using Mat2 = std::array<std::array<S, 2>, 2>;

template <class S>
S det2(const Mat2<S>& m) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

/// Index of the edge joining a and b (the first one found).
inline int find_edge(const Cellulation& c, int a, int b) {
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto& E = c.edge(e);
    if ((E.tail == a && E.head == b) || (E.tail == b && E.head == a)) return e;
  }
  throw DomainError("find_edge: no edge " + std::to_string(a) + "-" + std::to_string(b));
}

/// Pentagonal pyramid: pentagon 0..4 (counter-clockwise seen from the apex
/// side) and apex 5, the pentagon triangulated by the fan from 0.
inline Cellulation pentagonal_pyramid() {
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < 5; ++i) faces.push_back({i, (i + 1) % 5, 5});
  for (int i = 1; i <= 3; ++i) faces.push_back({0, i + 1, i});  // bottom, seen from below
  return Cellulation::from_faces(6, std::move(faces));
}

/// Composes the five transition maps around a pentagonal cell (the five
/// triangulations of a pentagon, visited 02,03 -> 03,13 -> 13,14 -> 14,24
/// -> 24,02 -> 02,03) and returns the linear part on the coordinates
/// (w(03), w(02)).
template <class S = Rational>
Mat2<S> pentagon_holonomy() {
  const Cellulation base = pentagonal_pyramid();
  const std::array<std::pair<int, int>, 5> sequence{{{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}}};
  Mat2<S> m{};
  const std::array<std::pair<int, int>, 2> coords{{{0, 3}, {0, 2}}};
  for (int col = 0; col < 2; ++col) {
    AngleChart<S> chart{base, std::vector<S>(base.num_edges(), S(0))};
    chart.w[find_edge(chart.cells, coords[col].first, coords[col].second)] = S(1);
    for (const auto& [a, b] : sequence) chart = flip_at(chart, find_edge(chart.cells, a, b));
    for (int row = 0; row < 2; ++row) m[row][col] = chart.w[find_edge(chart.cells, coords[row].first, coords[row].second)];
  }
  return m;
}

/// Octahedron N=0, S=1, equator 2..5 (counter-clockwise seen from N).
inline Cellulation octahedron_cells() {
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < 4; ++i) {
    const int a = 2 + i, b = 2 + (i + 1) % 4;
    faces.push_back({0, a, b});
    faces.push_back({1, b, a});
  }
  return Cellulation::from_faces(6, std::move(faces));
}

/// Holonomy around a codimension-2 cell where two walls with disjoint
/// quadrilaterals cross (octahedron edges N-E1 and S-E3): flip both, then
/// flip both back.  Linear part on the two diagonal coordinates.
template <class S = Rational>
Mat2<S> quad_pair_holonomy() {
  const Cellulation base = octahedron_cells();
  const int ea = find_edge(base, 0, 3), eb = find_edge(base, 1, 5);
  Mat2<S> m{};
  for (int col = 0; col < 2; ++col) {
    AngleChart<S> chart{base, std::vector<S>(base.num_edges(), S(0))};
    chart.w[col == 0 ? ea : eb] = S(1);
    // edge ids are kept by flips, so the same indices walk around the cell
    for (int e : {ea, eb, ea, eb}) chart = flip_at(chart, e);
    m[0][col] = chart.w[ea];
    m[1][col] = chart.w[eb];
  }
  return m;
}

}  // namespace idealhyp
