#pragma once

// Circle packings on the sphere through right-angled ideal polyhedra.
//
// A triangulation of the sphere is augmented into the cellulation whose
// vertices are its edges (future tangency points) and whose faces are one
// White polygon per original vertex and one Black polygon per original face;
// all exterior dihedral angles are pi/2.  Coning that cellulation from a
// vertex gives a ball triangulation; its volume-maximising structure is the
// ideal polyhedron whose face circles are the packing (White) and the dual
// orthogonal circles (Black).

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "idealhyp/angles.hpp"
#include "idealhyp/cellulation.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/geom.hpp"
#include "idealhyp/predicates.hpp"
#include "idealhyp/solver.hpp"

namespace idealhyp {

// ---------------------------------------------------------------------------
// Delaunay cellulation of points on the unit sphere

inline constexpr double kCoplanarMergeTolerance = 1e-10;
inline constexpr double kEmptyCapMargin = -1e-9;

namespace detail {

inline void check_sphere_points(const std::vector<Point3>& pts) {
  if (pts.size() < 4) throw DomainError("delaunay_on_sphere: need at least 4 points");
  for (const auto& p : pts) {
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (!std::isfinite(r) || std::abs(r - 1.0) > 1e-9) throw DomainError("delaunay_on_sphere: points must be unit vectors");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]);
      if (d < 1e-12) {
        throw DomainError("delaunay_on_sphere: points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

// Triangles of the convex hull, counter-clockwise seen from outside.
inline std::vector<std::array<int, 3>> hull_triangles(const std::vector<Point3>& pts) {
  const int n = static_cast<int>(pts.size());
  // initial tetrahedron: three distinct sphere points are never collinear,
  // so only the fourth point needs searching
  std::optional<std::array<int, 4>> start;
  for (int k = 2; k < n && !start; ++k) {
    for (int i = k + 1; i < n && !start; ++i) {
      if (orient3d(pts[0], pts[1], pts[k], pts[i]) != 0) start = std::array<int, 4>{0, 1, k, i};
    }
  }
  if (!start) throw DomainError("delaunay_on_sphere: all points are concyclic");
  const std::array<int, 4> t0 = *start;
  std::vector<std::array<int, 3>> faces;
  {
    const std::array<std::array<int, 4>, 4> combos{{{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}}};
    for (const auto& cmb : combos) {
      std::array<int, 3> f{t0[cmb[0]], t0[cmb[1]], t0[cmb[2]]};
      if (orient3d(pts[f[0]], pts[f[1]], pts[f[2]], pts[t0[cmb[3]]]) > 0) std::swap(f[1], f[2]);
      faces.push_back(f);
    }
  }
  std::vector<char> used(n, 0);
  for (int v : t0) used[v] = 1;
  for (int p = 0; p < n; ++p) {
    if (used[p]) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (orient3d(pts[faces[f][0]], pts[faces[f][1]], pts[faces[f][2]], pts[p]) > 0) visible[f] = any = 1;
    }
    if (!any) throw InternalError("delaunay_on_sphere: point inside the hull");
    std::set<std::pair<int, int>> visible_edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      for (int k = 0; k < 3; ++k) visible_edges.insert({faces[f][k], faces[f][(k + 1) % 3]});
    }
    std::vector<std::array<int, 3>> next;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) next.push_back(faces[f]);
    }
    for (const auto& [u, v] : visible_edges) {
      if (!visible_edges.count({v, u})) next.push_back({u, v, p});
    }
    faces = std::move(next);
  }
  return faces;
}

}  // namespace detail

/// Delaunay cellulation of distinct unit vectors: the faces of their convex
/// hull, with coplanar (hence concyclic) facets merged into polygons.  Faces
/// are counter-clockwise seen from outside the sphere.
inline Cellulation delaunay_on_sphere(const std::vector<Point3>& pts) {
  detail::check_sphere_points(pts);
  const auto tris = detail::hull_triangles(pts);
  const int nt = static_cast<int>(tris.size());
  std::map<std::pair<int, int>, int> owner;  // directed edge -> triangle
  for (int f = 0; f < nt; ++f) {
    for (int k = 0; k < 3; ++k) owner[{tris[f][k], tris[f][(k + 1) % 3]}] = f;
  }
  detail::DisjointSets groups(nt);
  for (int f = 0; f < nt; ++f) {
    for (int k = 0; k < 3; ++k) {
      const int u = tris[f][k], v = tris[f][(k + 1) % 3], w = tris[f][(k + 2) % 3];
      const int g = owner.at({v, u});
      int d = -1;
      for (int x : tris[g]) {
        if (x != u && x != v) d = x;
      }
      (void)w;
      const Point3 &A = pts[tris[f][0]], &B = pts[tris[f][1]], &C = pts[tris[f][2]];
      if (orient3d(A, B, C, pts[d]) == 0 || std::abs(orient3d_normalized(A, B, C, pts[d])) < kCoplanarMergeTolerance) {
        groups.unite(f, g);
      }
    }
  }
  std::map<int, std::map<int, int>> boundary;  // group -> (tail -> head)
  for (int f = 0; f < nt; ++f) {
    auto& out = boundary[groups.find(f)];
    for (int k = 0; k < 3; ++k) {
      const int u = tris[f][k], v = tris[f][(k + 1) % 3];
      if (groups.find(owner.at({v, u})) != groups.find(f)) out[u] = v;
    }
  }
  std::vector<std::vector<int>> faces;
  for (auto& [g, out] : boundary) {
    (void)g;
    std::vector<int> cyc;
    const int start = out.begin()->first;
    int v = start;
    do {
      cyc.push_back(v);
      v = out.at(v);
    } while (v != start && cyc.size() <= out.size());
    if (cyc.size() != out.size()) throw InternalError("delaunay_on_sphere: merged cell is not a simple polygon");
    faces.push_back(std::move(cyc));
  }
  Cellulation cells = Cellulation::from_faces(static_cast<int>(pts.size()), std::move(faces));
  // empty circumcap check
  for (int f = 0; f < cells.num_faces(); ++f) {
    const auto& cyc = cells.face(f);
    const std::set<int> on(cyc.begin(), cyc.end());
    for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
      if (on.count(p)) continue;
      const double m = -orient3d_normalized(pts[cyc[0]], pts[cyc[1]], pts[cyc[2]], pts[p]);
      if (m < kEmptyCapMargin) {
        throw InternalError("delaunay_on_sphere: point " + std::to_string(p) + " inside the circumcap of cell " +
                            std::to_string(f));
      }
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Augmentation and coning

enum class CircleRole { White, Black };

/// Augmented cellulation of `tri`: vertex i is edge i of `tri`; faces
/// 0..V-1 are the White polygons (original vertices, in order) and faces
/// V..V+F-1 the Black polygons (original faces); every exterior angle is
/// pi/2.  Polygonal faces are accepted and yield Black polygons with more
/// than three sides.
inline DihedralData thurston_augment(const Cellulation& tri) {
  const int V = tri.num_vertices(), F = tri.num_faces();
  for (int f = 0; f < F; ++f) {
    if (tri.face(f).size() < 3) throw DomainError("thurston_augment: face " + std::to_string(f) + " has fewer than 3 sides");
  }
  std::vector<std::vector<int>> faces(V + F);
  // corner of face f at position k: outgoing side face_edges[k], incoming
  // side face_edges[k-1]; counter-clockwise around the vertex the outgoing
  // side comes first.
  std::vector<std::optional<std::pair<int, int>>> first_corner(V);
  for (int f = 0; f < F; ++f) {
    const auto& cyc = tri.face(f);
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      if (!first_corner[cyc[k]]) first_corner[cyc[k]] = std::pair{f, static_cast<int>(k)};
    }
  }
  for (int v = 0; v < V; ++v) {
    if (!first_corner[v]) throw DomainError("thurston_augment: vertex " + std::to_string(v) + " lies on no face");
    auto [f, k] = *first_corner[v];
    const auto start = std::pair{f, k};
    do {
      const auto& fe = tri.face_edges(f);
      const int n = static_cast<int>(fe.size());
      const int out = fe[k];
      const int in = fe[(k + n - 1) % n];
      faces[v].push_back(out);
      // continue into the other face of the incoming side, where it leaves v
      const CellEdge& E = tri.edge(in);
      const int g = (E.left == f) ? E.right : E.left;
      const int pos = (E.left == f) ? E.right_pos : E.left_pos;
      // in g the side runs v -> other, so its position is the corner of v
      f = g;
      k = pos;
      if (tri.face(f)[k] != v) throw InternalError("thurston_augment: rotation around vertex failed");
    } while (std::pair{f, k} != start && faces[v].size() <= tri.edges().size());
  }
  for (int f = 0; f < F; ++f) faces[V + f] = tri.face_edges(f);
  DihedralData d;
  d.cells = Cellulation::from_faces(tri.num_edges(), std::move(faces));
  d.w.assign(d.cells.num_edges(), kPi / 2);
  d.source_edge.assign(d.cells.num_edges(), -1);
  return d;
}

/// Role of face f of thurston_augment(tri).
inline CircleRole augmented_role(const Cellulation& tri, int f) {
  return f < tri.num_vertices() ? CircleRole::White : CircleRole::Black;
}

/// Highest-valence vertex, lowest index on ties.
inline int default_apex(const Cellulation& cells) {
  int best = 0;
  for (int v = 1; v < cells.num_vertices(); ++v) {
    if (cells.valence(v) > cells.valence(best)) best = v;
  }
  return best;
}

/// Ball triangulation obtained by coning a polyhedral cellulation from one
/// of its vertices, with the dihedral targets of `d`: real boundary edges
/// get pi - w, diagonals inside boundary polygons pi (flat), interior edges
/// 2 pi.
struct ConeComplex {
  int apex = -1;
  GluingData gluing{0};
  IdealComplex complex;
  AngleTarget target;
  std::vector<int> to_cell_vertex;   // complex vertex class -> cellulation vertex
  std::vector<int> from_cell_vertex; // cellulation vertex -> complex vertex class
  std::vector<std::array<int, 4>> tet_labels;  // cellulation vertex of each tet vertex
};

inline ConeComplex cone_complex(const DihedralData& d, int apex = -1) {
  const Cellulation& C = d.cells;
  if (apex < 0) apex = default_apex(C);
  if (apex >= C.num_vertices()) throw DomainError("cone_complex: apex out of range");
  if (static_cast<int>(d.w.size()) != C.num_edges()) throw DomainError("cone_complex: angle vector size mismatch");
  ConeComplex out;
  out.apex = apex;
  for (int f = 0; f < C.num_faces(); ++f) {
    const auto& cyc = C.face(f);
    if (std::find(cyc.begin(), cyc.end(), apex) != cyc.end()) continue;
    for (std::size_t i = 1; i + 1 < cyc.size(); ++i) out.tet_labels.push_back({apex, cyc[0], cyc[i], cyc[i + 1]});
  }
  const int T = static_cast<int>(out.tet_labels.size());
  if (T == 0) throw DomainError("cone_complex: every face contains the apex");
  out.gluing = GluingData(T);
  std::map<std::array<int, 3>, std::pair<int, int>> open;  // sorted face labels -> (tet, face)
  for (int t = 0; t < T; ++t) {
    const auto& L = out.tet_labels[t];
    for (int f = 1; f < 4; ++f) {  // face 0 (opposite the apex) is boundary
      std::array<int, 3> key{};
      int k = 0;
      for (int v = 0; v < 4; ++v) {
        if (v != f) key[k++] = L[v];
      }
      std::sort(key.begin(), key.end());
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::pair{t, f});
        continue;
      }
      const auto [t2, f2] = it->second;
      open.erase(it);
      Perm p{};
      for (int v = 0; v < 4; ++v) {
        if (v == f) {
          p[v] = f2;
          continue;
        }
        const auto& L2 = out.tet_labels[t2];
        p[v] = static_cast<int>(std::find(L2.begin(), L2.end(), L[v]) - L2.begin());
      }
      if (perm_sign(p) > 0) throw InternalError("cone_complex: inconsistent orientation");
      out.gluing.glue(t, f, t2, p);
    }
  }
  out.complex = build_complex(out.gluing);
  const IdealComplex& X = out.complex;
  out.to_cell_vertex.assign(X.num_vertices(), -1);
  out.from_cell_vertex.assign(C.num_vertices(), -1);
  for (int t = 0; t < T; ++t) {
    for (int v = 0; v < 4; ++v) {
      const int cv = X.vertex_of(t, v), lab = out.tet_labels[t][v];
      if (out.to_cell_vertex[cv] >= 0 && out.to_cell_vertex[cv] != lab) {
        throw InternalError("cone_complex: vertex identification mismatch");
      }
      out.to_cell_vertex[cv] = lab;
      out.from_cell_vertex[lab] = cv;
    }
  }
  std::map<std::pair<int, int>, int> cell_edge;
  for (int e = 0; e < C.num_edges(); ++e) {
    if (!cell_edge.emplace(std::minmax(C.edge(e).tail, C.edge(e).head), e).second) {
      throw DomainError("cone_complex: two cellulation edges join the same vertices");
    }
  }
  out.target.totals.assign(X.num_edges(), 0.0);
  for (int e = 0; e < X.num_edges(); ++e) {
    const auto& E = X.edge(e);
    if (!E.boundary) {
      out.target.totals[e] = 2 * kPi;
      continue;
    }
    const auto key = std::minmax(out.to_cell_vertex[E.tail_vertex], out.to_cell_vertex[E.head_vertex]);
    auto it = cell_edge.find(key);
    out.target.totals[e] = (it == cell_edge.end()) ? kPi : kPi - d.w[it->second];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circle configurations

struct Incidence {
  int i = -1, j = -1;
  bool tangent = false;  // externally tangent disks; otherwise crossing
  double angle = 0.0;    // intersection angle of the two circles, for crossings
};

struct CircleConfig {
  std::vector<Circle> circles;
  std::vector<CircleRole> roles;
  std::vector<int> source;  // original vertex (White) or face (Black)
  std::vector<Incidence> incidences;
  std::vector<ProjPoint> points;  // tangency points, one per original edge
};

/// Spherical centre (unit vector) and angular radius of the disk of an
/// oriented circle, after inverse stereographic projection.
inline std::pair<Point3, double> spherical_cap(const Circle& k) {
  const auto S = k.normalized().lorentz();
  const double n = std::sqrt(S[0] * S[0] + S[1] * S[1] + S[2] * S[2]);
  return {Point3{-S[0] / n, -S[1] / n, -S[2] / n}, std::acos(std::clamp(-S[3] / n, -1.0, 1.0))};
}

/// Spherical gap between two caps: angle between their centres minus the
/// sum of their radii (zero for external tangency).
inline double tangency_residual(const Circle& a, const Circle& b) {
  const auto [ca, ra] = spherical_cap(a);
  const auto [cb, rb] = spherical_cap(b);
  const double d = std::acos(std::clamp(ca[0] * cb[0] + ca[1] * cb[1] + ca[2] * cb[2], -1.0, 1.0));
  return std::abs(d - ra - rb);
}

/// |angle between the circles - expected|, angle measured as the crossing
/// angle of the disks (pi/2 for orthogonal circles).
inline double crossing_residual(const Circle& a, const Circle& b, double angle) {
  const double c = std::clamp(circle_inner(a.normalized(), b.normalized()), -1.0, 1.0);
  return std::abs(std::acos(-c) - (kPi - angle));
}

inline double incidence_residual(const CircleConfig& cfg, const Incidence& in) {
  return in.tangent ? tangency_residual(cfg.circles[in.i], cfg.circles[in.j])
                    : crossing_residual(cfg.circles[in.i], cfg.circles[in.j], in.angle);
}

inline double max_incidence_residual(const CircleConfig& cfg, std::optional<bool> tangent_only = std::nullopt) {
  double r = 0.0;
  for (const auto& in : cfg.incidences) {
    if (tangent_only && in.tangent != *tangent_only) continue;
    r = std::max(r, incidence_residual(cfg, in));
  }
  return r;
}

/// Applies a Moebius map to every circle and point.
inline CircleConfig transformed(const CircleConfig& cfg, const Mobius& m) {
  CircleConfig out = cfg;
  for (auto& k : out.circles) k = apply(m, k);
  for (auto& p : out.points) p = m(p);
  return out;
}

/// Moebius map of the plane induced by a conformal map of the sphere,
/// determined from the images of 0, 1 and infinity.
template <class SphereMap>
Mobius mobius_from_sphere_map(SphereMap&& f) {
  const ProjPoint a = ProjPoint::from_sphere(f(ProjPoint::finite(0.0).to_sphere()));
  const ProjPoint b = ProjPoint::from_sphere(f(ProjPoint::finite(1.0).to_sphere()));
  const ProjPoint c = ProjPoint::from_sphere(f(ProjPoint::infinity().to_sphere()));
  return Mobius::to_standard(a, b, c).inverse();
}

/// Normalises a configuration: the conformal barycentre of the tangency
/// points is moved to the centre of the sphere, then the sphere is rotated
/// so that infinity is the candidate point (a Black cap centre) farthest
/// from every circle.  Deterministic.
inline CircleConfig normalize_config(const CircleConfig& cfg) {
  CircleConfig cur = cfg;
  if (cur.points.size() >= 2) {
    for (int it = 0; it < 500; ++it) {
      Point3 m{0, 0, 0};
      for (const auto& p : cur.points) {
        const auto s = p.to_sphere();
        for (int k = 0; k < 3; ++k) m[k] += s[k] / static_cast<double>(cur.points.size());
      }
      const double nm = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
      if (nm < 1e-15) break;
      // ball automorphism sending a to the centre, a = m / 2 (damped)
      const Point3 a{m[0] / 2, m[1] / 2, m[2] / 2};
      const double a2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
      auto phi = [&](const Point3& x) {
        const Point3 d{x[0] - a[0], x[1] - a[1], x[2] - a[2]};
        const double d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        const double den = 1 - 2 * (a[0] * x[0] + a[1] * x[1] + a[2] * x[2]) + a2;
        Point3 y{};
        for (int k = 0; k < 3; ++k) y[k] = ((1 - a2) * d[k] - d2 * a[k]) / den;
        return y;
      };
      cur = transformed(cur, mobius_from_sphere_map(phi));
    }
  }
  // pole choice
  std::vector<Point3> candidates;
  for (std::size_t i = 0; i < cur.circles.size(); ++i) {
    if (cur.roles[i] == CircleRole::Black) candidates.push_back(spherical_cap(cur.circles[i]).first);
  }
  if (candidates.empty()) {
    for (const auto& k : cur.circles) {
      const auto c = spherical_cap(k).first;
      candidates.push_back({-c[0], -c[1], -c[2]});
    }
  }
  if (candidates.empty()) return cur;
  double best = -1.0;
  Point3 pole{0, 0, 1};
  for (const auto& x : candidates) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& k : cur.circles) {
      const auto [c, r] = spherical_cap(k);
      const double ang = std::acos(std::clamp(c[0] * x[0] + c[1] * x[1] + c[2] * x[2], -1.0, 1.0));
      worst = std::min(worst, std::abs(ang - r));
    }
    if (worst > best + 1e-12) {
      best = worst;
      pole = x;
    }
  }
  // rotation taking pole to the north pole (0,0,1) = infinity
  const Point3 nz{0, 0, 1};
  const Point3 axis{pole[1] * nz[2] - pole[2] * nz[1], pole[2] * nz[0] - pole[0] * nz[2], pole[0] * nz[1] - pole[1] * nz[0]};
  const double s = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  const double cth = pole[2];
  if (s < 1e-15 && cth > 0) return cur;
  Point3 u = s < 1e-15 ? Point3{1, 0, 0} : Point3{axis[0] / s, axis[1] / s, axis[2] / s};
  const double th = std::atan2(s, cth);
  auto rot = [&](const Point3& x) {
    // Rodrigues
    const double cs = std::cos(th), sn = std::sin(th);
    const Point3 ux{u[1] * x[2] - u[2] * x[1], u[2] * x[0] - u[0] * x[2], u[0] * x[1] - u[1] * x[0]};
    const double ud = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
    Point3 y{};
    for (int k = 0; k < 3; ++k) y[k] = x[k] * cs + ux[k] * sn + u[k] * ud * (1 - cs);
    return y;
  };
  return transformed(cur, mobius_from_sphere_map(rot));
}

struct PackingResult {
  DihedralData data;
  ConeComplex cone;
  SolvedStructure solved;
  DevelopedComplex developed;
  CircleConfig config;      // as developed
  CircleConfig normalized;  // after normalize_config
  double max_concyclic_error = 0.0;
};

/// Full Koebe pipeline with diagnostics.  `apex` < 0 picks default_apex.
inline PackingResult koebe_pack_full(const Cellulation& tri, int apex = -1, SolveOptions opts = {}) {
  if (!tri.is_sphere()) throw UnsupportedTopologyError("koebe_pack: input is not a cellulation of the sphere");
  PackingResult res;
  res.data = thurston_augment(tri);
  const ValidationReport rep = validate_dihedral_data(res.data, 6);
  if (!rep.ok()) {
    std::string msg = "koebe_pack: augmented angle data violates the realisability conditions:";
    for (const auto& v : rep.violations) msg += " [" + v.kind + ": " + v.where + "]";
    throw DomainError(msg);
  }
  res.cone = cone_complex(res.data, apex);
  res.solved = solve_structure(res.cone.complex, res.cone.target, opts);
  if (res.solved.status != SolveStatus::Converged) {
    std::string msg = std::string("koebe_pack: solver returned ") + to_string(res.solved.status);
    if (res.solved.status == SolveStatus::Degenerate) {
      msg += std::string(" (") + to_string(res.solved.degeneracy.reason) + "): " + res.solved.degeneracy.detail;
    }
    throw CertificationError(msg);
  }
  res.developed = develop(res.cone.complex, res.solved.assignment);

  const Cellulation& C = res.data.cells;
  CircleConfig& cfg = res.config;
  for (int v = 0; v < C.num_vertices(); ++v) cfg.points.push_back(res.developed.vertices[res.cone.from_cell_vertex[v]]);
  for (int f = 0; f < C.num_faces(); ++f) {
    const auto& cyc = C.face(f);
    Circle k = Circle::through(cfg.points[cyc[0]], cfg.points[cyc[1]], cfg.points[cyc[2]]);
    for (std::size_t i = 3; i < cyc.size(); ++i) {
      res.max_concyclic_error = std::max(res.max_concyclic_error, std::abs(k.form(cfg.points[cyc[i]].normalized())));
    }
    // the disk is the side without polyhedron vertices
    double worst = 0.0;
    const std::set<int> on(cyc.begin(), cyc.end());
    for (int v = 0; v < C.num_vertices(); ++v) {
      if (on.count(v)) continue;
      const double s = k.form(cfg.points[v].normalized());
      if (std::abs(s) > std::abs(worst)) worst = s;
    }
    if (worst < 0) k = k.flipped();
    cfg.circles.push_back(k);
    cfg.roles.push_back(augmented_role(tri, f));
    cfg.source.push_back(f < tri.num_vertices() ? f : f - tri.num_vertices());
  }
  for (int e = 0; e < tri.num_edges(); ++e) {
    cfg.incidences.push_back({tri.edge(e).tail, tri.edge(e).head, true, 0.0});
  }
  for (int f = 0; f < tri.num_faces(); ++f) {
    for (int v : tri.face(f)) cfg.incidences.push_back({v, tri.num_vertices() + f, false, kPi / 2});
  }
  res.normalized = normalize_config(cfg);
  return res;
}

inline CircleConfig koebe_pack(const Cellulation& tri, int apex = -1) { return koebe_pack_full(tri, apex).normalized; }

/// For each vertex of the augmented cellulation, the sum over the edges at
/// it of the exterior angle between the circles of the two faces along the
/// edge, read off the circles.
inline std::vector<double> vertex_exterior_angle_sums(const DihedralData& d, const CircleConfig& cfg) {
  const Cellulation& C = d.cells;
  std::vector<double> sums(C.num_vertices(), 0.0);
  for (int e = 0; e < C.num_edges(); ++e) {
    const auto& E = C.edge(e);
    const double inner = std::clamp(circle_inner(cfg.circles[E.left].normalized(), cfg.circles[E.right].normalized()), -1.0, 1.0);
    const double ext = kPi - std::acos(-inner);
    sums[E.tail] += ext;
    sums[E.head] += ext;
  }
  return sums;
}

}  // namespace idealhyp
