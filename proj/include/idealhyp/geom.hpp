#pragma once

// Upper half-space geometry: points of the Riemann sphere in homogeneous
// coordinates, Moebius maps, oriented circles, ideal tetrahedron shapes,
// shears, horosphere-truncated lengths and the developing map.
//
// Placement convention: a tet with angles (alpha, beta, gamma) is placed with
// vertices (v0, v1, v2, v3) at (0, inf, z, 1) where z = shape_from_angles(a, 0)
// is the shape at the vertical edge (v0, v1).  More generally, if (a,b,c,d)
// is an even permutation of the tet labels, the placement
// (a,b,c,d) -> (0, 1, inf, w) has Im w > 0 and
//   w = sin(theta_bc) / sin(theta_cd) * exp(i theta_ac).

#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <optional>
#include <vector>

#include "idealhyp/angles.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/errors.hpp"
#include "idealhyp/loba.hpp"

namespace idealhyp {

using cplx = std::complex<double>;

/// Point x/y of the Riemann sphere; (1, 0) is infinity.
struct ProjPoint {
  cplx x{0.0, 0.0};
  cplx y{1.0, 0.0};

  static ProjPoint finite(cplx z) { return {z, 1.0}; }
  static ProjPoint infinity() { return {1.0, 0.0}; }

  bool is_infinite(double tol = 1e-300) const { return std::abs(y) <= tol * std::abs(x); }
  /// Affine coordinate; infinite points give a non-finite value.
  cplx value() const { return x / y; }

  ProjPoint normalized() const {
    const double n = std::sqrt(std::norm(x) + std::norm(y));
    return {x / n, y / n};
  }

  /// Image on the unit sphere under inverse stereographic projection from
  /// the north pole (infinity -> (0,0,1)).
  std::array<double, 3> to_sphere() const {
    const cplx xy = x * std::conj(y);
    const double nx = std::norm(x), ny = std::norm(y), s = nx + ny;
    return {2 * xy.real() / s, 2 * xy.imag() / s, (nx - ny) / s};
  }

  static ProjPoint from_sphere(const std::array<double, 3>& p) {
    // inverse of to_sphere: z = (p0 + i p1) / (1 - p2), written without
    // cancellation near the pole.
    if (p[2] > 0) return ProjPoint{cplx(1.0 + p[2], 0.0), cplx(p[0], -p[1])}.normalized();
    return ProjPoint{cplx(p[0], p[1]), cplx(1.0 - p[2], 0.0)}.normalized();
  }
};

/// <p,q> = p.x q.y - p.y q.x; zero iff p == q on the sphere.
inline cplx bracket(const ProjPoint& p, const ProjPoint& q) { return p.x * q.y - p.y * q.x; }

/// Chordal distance on the unit sphere (diameter 2).
inline double chordal_distance(const ProjPoint& p, const ProjPoint& q) {
  const double np = std::sqrt(std::norm(p.x) + std::norm(p.y));
  const double nq = std::sqrt(std::norm(q.x) + std::norm(q.y));
  return 2.0 * std::abs(bracket(p, q)) / (np * nq);
}

/// z -> (a z + b) / (c z + d).
struct Mobius {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  ProjPoint operator()(const ProjPoint& p) const { return ProjPoint{a * p.x + b * p.y, c * p.x + d * p.y}.normalized(); }
  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mobius inverse() const { return {d, -b, -c, a}; }
  cplx det() const { return a * d - b * c; }

  /// Sends p0 -> 0, p1 -> 1, p2 -> infinity.
  static Mobius to_standard(const ProjPoint& p0, const ProjPoint& p1, const ProjPoint& p2) {
    const cplx k1 = bracket(p1, p2), k2 = bracket(p1, p0);
    return {p0.y * k1, -p0.x * k1, p2.y * k2, -p2.x * k2};
  }
};

/// Image of p3 under the map sending (p0, p1, p2) to (0, 1, infinity).
inline ProjPoint cross_ratio(const ProjPoint& p0, const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3) {
  return Mobius::to_standard(p0, p1, p2)(p3);
}

// ---------------------------------------------------------------------------
// Oriented circles

/// Oriented circle {a|z|^2 - 2 Re(conj(b) z) + c = 0}; the open disk it
/// bounds is where the form is negative.  Normalised so |b|^2 - a c = 1.
/// a == 0 gives a line, the disk is then a half plane.
struct Circle {
  double a = 0.0;
  cplx b{0.0};
  double c = 0.0;

  static Circle from_center_radius(cplx center, double radius) {
    Circle k{1.0 / radius, center / radius, (std::norm(center) - radius * radius) / radius};
    return k;
  }

  /// Line through p with the disk on the left of direction `dir`.
  static Circle from_line(cplx p, cplx dir) {
    const cplx n = cplx(0, 1) * dir / std::abs(dir);  // left normal
    // disk: Re(conj(n) (z - p)) > 0  <=>  -2 Re(conj(b) z) + c < 0 with b = n/2 ... scaled to |b| = 1
    const cplx b = n;
    const double c = -2.0 * (std::conj(n) * p).real();
    return Circle{0.0, b, c};
  }

  double form(const ProjPoint& p) const {
    return a * std::norm(p.x) - 2.0 * (std::conj(b) * p.x * std::conj(p.y)).real() + c * std::norm(p.y);
  }

  bool is_line(double tol = 1e-12) const { return std::abs(a) <= tol; }
  cplx center() const { return b / a; }
  double radius() const { return 1.0 / std::abs(a); }
  /// The disk is the bounded side of the circle.
  bool disk_is_bounded() const { return a > 0; }

  Circle flipped() const { return {-a, -b, -c}; }

  /// Lorentz vector (S1, S2, S3, S0) with <S,S> = 1 in signature (+,+,+,-).
  std::array<double, 4> lorentz() const { return {-b.real(), -b.imag(), (a - c) / 2, -(a + c) / 2}; }
  static Circle from_lorentz(const std::array<double, 4>& s) {
    // a - c = 2 s3, a + c = -2 s0
    return Circle{s[2] - s[3], cplx(-s[0], -s[1]), -s[2] - s[3]};
  }

  Circle normalized() const {
    const double q = std::norm(b) - a * c;
    const double k = 1.0 / std::sqrt(q);
    return {a * k, b * k, c * k};
  }

  /// Oriented circle through three distinct points, disk on the left of the
  /// traversal p -> q -> r.
  static Circle through(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r) {
    // Lorentz vector orthogonal to the three null vectors.
    auto null_vec = [](const ProjPoint& w) {
      const ProjPoint n = w.normalized();
      const cplx xy = n.x * std::conj(n.y);
      const double nx = std::norm(n.x), ny = std::norm(n.y);
      return std::array<double, 4>{2 * xy.real(), 2 * xy.imag(), nx - ny, nx + ny};
    };
    const auto N1 = null_vec(p), N2 = null_vec(q), N3 = null_vec(r);
    // Euclidean generalized cross product, then raise the index of the time
    // coordinate so that <S, N_k>_L = 0.
    auto det3 = [](double a1, double a2, double a3, double b1, double b2, double b3, double c1, double c2, double c3) {
      return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
    };
    std::array<double, 4> E{};
    E[0] = det3(N1[1], N1[2], N1[3], N2[1], N2[2], N2[3], N3[1], N3[2], N3[3]);
    E[1] = -det3(N1[0], N1[2], N1[3], N2[0], N2[2], N2[3], N3[0], N3[2], N3[3]);
    E[2] = det3(N1[0], N1[1], N1[3], N2[0], N2[1], N2[3], N3[0], N3[1], N3[3]);
    E[3] = -det3(N1[0], N1[1], N1[2], N2[0], N2[1], N2[2], N3[0], N3[1], N3[2]);
    const std::array<double, 4> S{E[0], E[1], E[2], -E[3]};
    Circle k = from_lorentz(S).normalized();
    // (p, q, r) -> (0, 1, inf) maps the traversal to the real line left to
    // right; the upper half plane is on the left.
    const ProjPoint left = Mobius::to_standard(p, q, r).inverse()(ProjPoint::finite(cplx(0, 1)));
    if (k.form(left) > 0) k = k.flipped();
    return k;
  }
};

/// Lorentzian inner product of two normalised oriented circles: the cosine
/// of their intersection angle; -1 for externally tangent disks, +1 for
/// internally tangent, 0 for orthogonal.
inline double circle_inner(const Circle& u, const Circle& v) {
  return (u.b * std::conj(v.b)).real() - 0.5 * (u.a * v.c + v.a * u.c);
}

/// Image of an oriented circle under a Moebius map.
inline Circle apply(const Mobius& m, const Circle& k) {
  // Hermitian form H = [[a, -b],[-conj b, c]]; pull back by the inverse.
  const Mobius n = m.inverse();
  // H' = N^* H N with N = [[n.a, n.b],[n.c, n.d]]
  const cplx h11 = k.a, h12 = -k.b, h21 = -std::conj(k.b), h22 = k.c;
  const cplx m11 = n.a, m12 = n.b, m21 = n.c, m22 = n.d;
  auto entry = [&](cplx ci, cplx di, cplx cj, cplx dj) {
    // (col i)^* H (col j), col = (ci, di)
    return std::conj(ci) * (h11 * cj + h12 * dj) + std::conj(di) * (h21 * cj + h22 * dj);
  };
  const cplx A = entry(m11, m21, m11, m21);
  const cplx B = entry(m11, m21, m12, m22);
  const cplx C = entry(m12, m22, m12, m22);
  Circle out{A.real(), -B, C.real()};
  const double s = std::abs(n.det());
  out = Circle{out.a / s, out.b / s, out.c / s};
  return out.normalized();
}

// ---------------------------------------------------------------------------
// Ideal tetrahedra

/// Shape of an ideal tetrahedron as the position z of its fourth vertex when
/// the other three sit at 0, 1 and infinity.
struct ShapeParam {
  cplx z;
};

/// Shape at the edge of class angle_class(edge): with theta_k the angle there
/// and theta_{k+1}, theta_{k+2} the next ones cyclically,
///   z = sin(theta_{k+1}) / sin(theta_{k+2}) * exp(i theta_k).
inline ShapeParam shape_from_angles(const TetAngles& a, int edge) {
  a.check();
  if (edge < 0 || edge > 5) throw DomainError("shape_from_angles: edge index out of range");
  const int k = angle_class(edge);
  const double t0 = a[k], t1 = a[(k + 1) % 3], t2 = a[(k + 2) % 3];
  return {std::sin(t1) / std::sin(t2) * std::polar(1.0, t0)};
}

/// Inverse of shape_from_angles.
inline TetAngles angles_from_shape(const ShapeParam& s, int edge) {
  if (!(s.z.imag() > 0)) throw DomainError("angles_from_shape: shape must have positive imaginary part");
  const int k = angle_class(edge);
  TetAngles a;
  a[k] = std::arg(s.z);
  a[(k + 1) % 3] = std::arg(1.0 / (1.0 - s.z));
  a[(k + 2) % 3] = std::arg((s.z - 1.0) / s.z);
  return a;
}

/// Shear of the tet at an edge: log(sin theta_{k+1} / sin theta_{k+2}), the
/// signed distance along the edge between the feet of the perpendiculars
/// from the two remaining vertices.  Opposite edges have equal shear and the
/// three shears at a vertex sum to zero.
inline double shear_at_edge(const TetAngles& a, int edge) {
  if (edge < 0 || edge > 5) throw DomainError("shear_at_edge: edge index out of range");
  const int k = angle_class(edge);
  const double s1 = std::sin(a[(k + 1) % 3]), s2 = std::sin(a[(k + 2) % 3]);
  if (!(s1 > 0) || !(s2 > 0)) throw SingularityError("shear_at_edge: degenerate angles");
  return std::log(s1 / s2);
}

/// Positions of the tet vertices in the standard placement (0, inf, z, 1).
inline std::array<ProjPoint, 4> standard_placement(const ShapeParam& s) {
  return {ProjPoint::finite(0.0), ProjPoint::infinity(), ProjPoint::finite(s.z), ProjPoint::finite(1.0)};
}

/// One positive decoration per vertex: the Euclidean diameter of the
/// horosphere at a finite vertex, or the height of the horizontal horosphere
/// at infinity.
struct HoroChoice {
  std::array<double, 4> decoration{1.0, 1.0, 1.0, 1.0};
};

/// Signed distance between horospheres centred at p and q with decorations
/// dp and dq (negative when the horoballs overlap).
inline double horo_length(const ProjPoint& p, double dp, const ProjPoint& q, double dq) {
  if (!(dp > 0) || !(dq > 0)) throw DomainError("horo_length: decorations must be positive");
  const bool pinf = p.is_infinite(), qinf = q.is_infinite();
  if (pinf && qinf) throw DomainError("horo_length: both endpoints at infinity");
  if (pinf) return std::log(dp / dq);
  if (qinf) return std::log(dq / dp);
  return std::log(std::norm(p.value() - q.value()) / (dp * dq));
}

/// Truncated length of edge `edge` of the tet with shape z in the standard
/// placement (0, inf, z, 1).
inline double truncated_edge_length(const ShapeParam& s, int edge, const HoroChoice& h) {
  if (edge < 0 || edge > 5) throw DomainError("truncated_edge_length: edge index out of range");
  const auto P = standard_placement(s);
  const int i = kTetEdges[edge][0], j = kTetEdges[edge][1];
  return horo_length(P[i], h.decoration[i], P[j], h.decoration[j]);
}

namespace detail {

// Even ordering (a, b, c, d) of the tet labels with d given and {a,b,c} the
// rest.
inline std::array<int, 4> even_ordering_ending_with(int d) {
  std::array<int, 4> o{};
  int k = 0;
  for (int v = 0; v < 4; ++v) {
    if (v != d) o[k++] = v;
  }
  o[3] = d;
  if (perm_sign({o[0], o[1], o[2], o[3]}) < 0) std::swap(o[0], o[1]);
  return o;
}

// Shape w of the placement (a,b,c,d) -> (0,1,inf,w) for an even ordering.
inline cplx ordered_shape(const TetAngles& t, const std::array<int, 4>& o) {
  const double th_ac = t[angle_class(tet_edge_index(o[0], o[2]))];
  const double th_bc = t[angle_class(tet_edge_index(o[1], o[2]))];
  const double th_cd = t[angle_class(tet_edge_index(o[2], o[3]))];
  return std::sin(th_bc) / std::sin(th_cd) * std::polar(1.0, th_ac);
}

// Position of vertex o[3] given positions of o[0], o[1], o[2].
inline ProjPoint place_fourth(const TetAngles& t, const std::array<int, 4>& o, const ProjPoint& pa,
                              const ProjPoint& pb, const ProjPoint& pc) {
  const cplx w = ordered_shape(t, o);
  return Mobius::to_standard(pa, pb, pc).inverse()(ProjPoint::finite(w));
}

}  // namespace detail

/// Result of developing a ball complex into the upper half-space.
struct DevelopedComplex {
  std::vector<ProjPoint> vertices;                // per vertex class
  std::vector<std::array<ProjPoint, 4>> tet_vertices;  // per tet
  std::vector<Circle> face_circles;               // per boundary cellulation face, disk outside M
  std::vector<double> dihedral;                   // per boundary cellulation edge, interior angle
  double max_placement_error = 0.0;
};

inline constexpr double kPlacementTolerance = 1e-7;

/// Develops a ball complex with a smooth angle assignment.  The base tet is
/// placed at (0, inf, z, 1); other tets are placed across interior faces.
/// Every vertex reached along two gluing paths must land at the same point.
inline DevelopedComplex develop(const IdealComplex& c, const AngleAssignment& a, int base = 0,
                                double tol = kPlacementTolerance) {
  if (!c.is_ball()) throw UnsupportedTopologyError("develop: complex is not a ball");
  if (a.size() != c.num_tets()) throw DomainError("develop: assignment size mismatch");
  if (base < 0 || base >= c.num_tets()) throw DomainError("develop: base tet out of range");
  const auto& g = c.gluing();
  const int T = c.num_tets();

  DevelopedComplex out;
  out.tet_vertices.resize(T);
  std::vector<char> placed(T, 0);
  std::vector<std::optional<ProjPoint>> vpos(c.num_vertices());

  auto record_vertex = [&](int t, int v, const ProjPoint& p) {
    auto& slot = vpos[c.vertex_of(t, v)];
    if (!slot) {
      slot = p.normalized();
    } else {
      const double err = chordal_distance(*slot, p);
      out.max_placement_error = std::max(out.max_placement_error, err);
      if (err > tol) {
        throw CertificationError("develop: vertex " + std::to_string(c.vertex_of(t, v)) +
                                 " lands at two different points (chordal error " + std::to_string(err) +
                                 "); the structure is not smooth");
      }
    }
  };

  {
    const auto P = standard_placement(shape_from_angles(a.tets[base], 0));
    for (int v = 0; v < 4; ++v) {
      out.tet_vertices[base][v] = P[v];
      record_vertex(base, v, P[v]);
    }
    placed[base] = 1;
  }
  std::deque<int> queue{base};
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    for (int f = 0; f < 4; ++f) {
      const auto& gl = g.faces[t][f];
      if (!gl) continue;
      const int t2 = gl->tet;
      std::array<std::optional<ProjPoint>, 4> known;
      for (int v = 0; v < 4; ++v) {
        if (v != f) known[gl->perm[v]] = out.tet_vertices[t][v];
      }
      const int d = gl->face;
      const auto o = detail::even_ordering_ending_with(d);
      const ProjPoint pd = detail::place_fourth(a.tets[t2], o, *known[o[0]], *known[o[1]], *known[o[2]]);
      known[d] = pd;
      if (placed[t2]) {
        for (int v = 0; v < 4; ++v) {
          const double err = chordal_distance(out.tet_vertices[t2][v], *known[v]);
          out.max_placement_error = std::max(out.max_placement_error, err);
          if (err > tol) {
            throw CertificationError("develop: tet " + std::to_string(t2) +
                                     " is placed inconsistently (chordal error " + std::to_string(err) +
                                     "); the structure is not smooth");
          }
        }
        continue;
      }
      for (int v = 0; v < 4; ++v) {
        out.tet_vertices[t2][v] = *known[v];
        record_vertex(t2, v, *known[v]);
      }
      placed[t2] = 1;
      queue.push_back(t2);
    }
  }
  out.vertices.reserve(c.num_vertices());
  for (const auto& p : vpos) {
    if (!p) throw InternalError("develop: vertex class never placed");
    out.vertices.push_back(*p);
  }

  // boundary face circles, oriented so that the disk is the cap cut off
  // from the polyhedron (no other vertex inside).
  const Cellulation& B = c.boundary();
  for (int bf = 0; bf < B.num_faces(); ++bf) {
    const auto& cyc = B.face(bf);
    Circle k = Circle::through(out.vertices[cyc[0]], out.vertices[cyc[1]], out.vertices[cyc[2]]);
    double worst = 0.0;
    for (int v = 0; v < c.num_vertices(); ++v) {
      if (v == cyc[0] || v == cyc[1] || v == cyc[2]) continue;
      const double s = k.form(out.vertices[v].normalized());
      if (std::abs(s) > std::abs(worst)) worst = s;
    }
    if (worst < 0) k = k.flipped();
    out.face_circles.push_back(k);
  }

  // realized interior dihedral angle at each boundary edge: the angle swept
  // around the edge from the start boundary face to the end boundary face.
  out.dihedral.assign(B.num_edges(), 0.0);
  for (int e : c.boundary_edges()) {
    const EdgeClass& E = c.edge(e);
    const OrientedSlot& s0 = E.slots.front();
    const OrientedSlot& s1 = E.slots.back();
    const auto& P0 = out.tet_vertices[s0.tet];
    const auto& P1 = out.tet_vertices[s1.tet];
    // map tail -> 0, head -> inf
    const ProjPoint tail = P0[s0.tail], head = P0[s0.head];
    auto coord = [&](const ProjPoint& w) { return bracket(w, tail) / bracket(w, head); };
    const int start_third = 6 - s0.tail - s0.head - E.start_face;
    const int end_third = 6 - s1.tail - s1.head - E.end_face;
    // wedge direction of the first tet: with (tail, x, head, y) even, the
    // tet occupies the counter-clockwise sector from x to y.
    std::array<int, 4> o{s0.tail, -1, s0.head, -1};
    {
      int k = 1;
      for (int v = 0; v < 4; ++v) {
        if (v != s0.tail && v != s0.head) {
          o[k] = v;
          k += 2;
        }
      }
      if (perm_sign({o[0], o[1], o[2], o[3]}) < 0) std::swap(o[1], o[3]);
    }
    const cplx zs = coord(P0[start_third]);
    const cplx ze = coord(P1[end_third]);
    double ang = (o[1] == start_third) ? std::arg(ze / zs) : std::arg(zs / ze);
    if (ang <= 0) ang += 2 * kPi;
    out.dihedral[E.boundary_edge] = ang;
  }
  return out;
}

/// Maximal chordal distance between the images of the three-point
/// normalisations of two vertex configurations: zero iff they differ by a
/// Moebius map (given that the first three points are distinct).
inline double mobius_discrepancy(const std::vector<ProjPoint>& p, const std::vector<ProjPoint>& q) {
  if (p.size() != q.size() || p.size() < 3) throw DomainError("mobius_discrepancy: need matching configurations of >= 3 points");
  const Mobius mp = Mobius::to_standard(p[0], p[1], p[2]);
  const Mobius mq = Mobius::to_standard(q[0], q[1], q[2]);
  double worst = 0.0;
  for (std::size_t i = 3; i < p.size(); ++i) worst = std::max(worst, chordal_distance(mp(p[i]), mq(q[i])));
  return worst;
}

}  // namespace idealhyp
