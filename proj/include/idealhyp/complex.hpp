#pragma once

// Ideal triangulations of 3-manifolds with boundary, described by face
// gluings between tetrahedra.
//
// Conventions (fixed throughout the library):
//   * tet vertices are labelled 0..3; face f is the face opposite vertex f;
//   * edge (i,j), i<j, has index 0..5 in lexicographic order:
//       0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(1,3) 5:(2,3);
//     edges e and 5-e are opposite and carry the same dihedral angle, so the
//     angle class of edge e is min(e, 5-e);
//   * a gluing (t,f) -> (t',f',p) identifies vertex v of t with p[v] of t';
//     p[f] == f' and p must be odd so that the glued manifold is oriented;
//   * the boundary orientation of face f is the triple (x,y,z) for which
//     (f,x,y,z) is an even permutation of (0,1,2,3).

#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "idealhyp/cellulation.hpp"
#include "idealhyp/errors.hpp"

namespace idealhyp {

using Perm = std::array<int, 4>;

inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline int tet_edge_index(int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 3 || j > 3) throw DomainError("tet_edge_index: bad vertex pair");
  if (i > j) std::swap(i, j);
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[i][j];
}

inline int opposite_edge(int e) { return 5 - e; }
inline int angle_class(int e) { return e < 3 ? e : 5 - e; }

inline bool is_permutation(const Perm& p) {
  std::array<bool, 4> seen{};
  for (int v : p) {
    if (v < 0 || v > 3 || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline int perm_sign(const Perm& p) {
  int inversions = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) inversions += p[i] > p[j];
  }
  return inversions % 2 == 0 ? 1 : -1;
}

inline Perm perm_inverse(const Perm& p) {
  Perm q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

/// Oriented boundary triple of face f (see file comment).
inline std::array<int, 3> face_vertices(int f) {
  static constexpr int table[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  return {table[f][0], table[f][1], table[f][2]};
}

struct Gluing {
  int tet = -1;
  int face = -1;
  Perm perm{0, 1, 2, 3};
  friend bool operator==(const Gluing&, const Gluing&) = default;
};

/// Face pairings of a set of tetrahedra.  An empty entry is a boundary face.
struct GluingData {
  int num_tets = 0;
  std::vector<std::array<std::optional<Gluing>, 4>> faces;

  GluingData() = default;
  explicit GluingData(int n) : num_tets(n), faces(n) {}

  /// Glues face f of tet t to tet t2 by p, recording both directions.
  void glue(int t, int f, int t2, const Perm& p) {
    faces.at(t).at(f) = Gluing{t2, p[f], p};
    faces.at(t2).at(p[f]) = Gluing{t, f, perm_inverse(p)};
  }

  friend bool operator==(const GluingData&, const GluingData&) = default;
};

/// A tet edge traversed from vertex `tail` to vertex `head`.
struct OrientedSlot {
  int tet = -1;
  int tail = -1;
  int head = -1;
  int edge() const { return tet_edge_index(tail, head); }
  friend bool operator==(const OrientedSlot&, const OrientedSlot&) = default;
};

/// An edge of the triangulation: the tet edges identified by the gluings,
/// listed in the cyclic (interior) or linear (boundary) order in which they
/// are met when turning around the edge.
struct EdgeClass {
  bool boundary = false;
  std::vector<OrientedSlot> slots;
  int tail_vertex = -1;
  int head_vertex = -1;
  // Boundary classes: the boundary faces bounding the chain of slots.  The
  // start face contains slots.front(), the end face slots.back().
  int start_tet = -1, start_face = -1;
  int end_tet = -1, end_face = -1;
  int boundary_edge = -1;  // index in the boundary cellulation
};

/// Combinatorial counts entering the Euler identity 2f = 2 e_i + e_b - v.
struct ComplexCounts {
  int tets = 0;
  int interior_edges = 0;
  int boundary_edges = 0;
  int vertices = 0;
};

class IdealComplex {
 public:
  const GluingData& gluing() const { return gluing_; }
  int num_tets() const { return gluing_.num_tets; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_vertices() const { return num_vertices_; }
  const std::vector<EdgeClass>& edges() const { return edges_; }
  const EdgeClass& edge(int e) const { return edges_.at(e); }
  /// Edge class containing edge `e` (0..5) of tet t.
  int edge_of(int t, int e) const { return slot_edge_.at(t).at(e); }
  /// Vertex class containing vertex v of tet t.
  int vertex_of(int t, int v) const { return slot_vertex_.at(t).at(v); }

  const std::vector<int>& interior_edges() const { return interior_; }
  const std::vector<int>& boundary_edges() const { return boundary_; }

  /// Boundary surface: vertices are vertex classes, faces are the unglued tet
  /// faces, edges the boundary edge classes.
  const Cellulation& boundary() const { return bcells_; }
  /// Boundary cellulation face -> (tet, face).
  const std::vector<std::pair<int, int>>& boundary_face_source() const { return boundary_face_source_; }
  /// Boundary cellulation edge -> edge class.
  const std::vector<int>& boundary_edge_class() const { return boundary_edge_class_; }

  /// Connected complex whose boundary is a single sphere.
  bool is_ball() const { return is_ball_; }

  ComplexCounts counts() const {
    return {num_tets(), static_cast<int>(interior_.size()), static_cast<int>(boundary_.size()), num_vertices_};
  }

 private:
  friend IdealComplex build_complex(const GluingData& g);

  GluingData gluing_;
  std::vector<EdgeClass> edges_;
  std::vector<std::array<int, 6>> slot_edge_;
  std::vector<std::array<int, 4>> slot_vertex_;
  int num_vertices_ = 0;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  Cellulation bcells_;
  std::vector<std::pair<int, int>> boundary_face_source_;
  std::vector<int> boundary_edge_class_;
  bool is_ball_ = false;
};

namespace detail {

inline void check_gluing_data(const GluingData& g) {
  if (g.num_tets <= 0) throw ValidationError("gluing data: no tetrahedra");
  if (static_cast<int>(g.faces.size()) != g.num_tets) throw ValidationError("gluing data: face table size mismatch");
  for (int t = 0; t < g.num_tets; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& gl = g.faces[t][f];
      if (!gl) continue;
      if (gl->tet < 0 || gl->tet >= g.num_tets || gl->face < 0 || gl->face > 3) {
        throw ValidationError("gluing (" + std::to_string(t) + "," + std::to_string(f) + ") refers to a missing face", t, f);
      }
      if (!is_permutation(gl->perm) || gl->perm[f] != gl->face) {
        throw ValidationError("gluing (" + std::to_string(t) + "," + std::to_string(f) +
                                  ") has a permutation that does not map the face to its partner",
                              t, f);
      }
      if (gl->tet == t && gl->face == f) {
        throw ValidationError("face (" + std::to_string(t) + "," + std::to_string(f) + ") is glued to itself", t, f);
      }
      const auto& back = g.faces[gl->tet][gl->face];
      if (!back || back->tet != t || back->face != f || back->perm != perm_inverse(gl->perm)) {
        throw ValidationError("non-involutive gluing at (" + std::to_string(t) + "," + std::to_string(f) + ")", t, f);
      }
      if (perm_sign(gl->perm) != -1) {
        throw ValidationError("orientation-preserving gluing at (" + std::to_string(t) + "," + std::to_string(f) +
                                  "); gluings must reverse orientation",
                              t, f);
      }
    }
  }
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Builds edge classes, vertex classes and the boundary cellulation.
/// Throws ValidationError naming the offending (tet, face) on bad input.
inline IdealComplex build_complex(const GluingData& g) {
  detail::check_gluing_data(g);
  IdealComplex c;
  c.gluing_ = g;
  const int T = g.num_tets;

  // vertex classes
  detail::DisjointSets vs(4 * T);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& gl = g.faces[t][f];
      if (!gl) continue;
      for (int v = 0; v < 4; ++v) {
        if (v != f) vs.unite(4 * t + v, 4 * gl->tet + gl->perm[v]);
      }
    }
  }
  c.slot_vertex_.assign(T, {-1, -1, -1, -1});
  std::vector<int> vertex_id(4 * T, -1);
  for (int t = 0; t < T; ++t) {
    for (int v = 0; v < 4; ++v) {
      int& id = vertex_id[vs.find(4 * t + v)];
      if (id < 0) id = c.num_vertices_++;
      c.slot_vertex_[t][v] = id;
    }
  }

  // edge classes by walking around each tet edge through the face gluings
  c.slot_edge_.assign(T, {-1, -1, -1, -1, -1, -1});
  struct WalkState {
    int tet, a, b, exit_opp;
  };
  auto other_two = [](int a, int b) {
    std::array<int, 2> r{};
    int k = 0;
    for (int v = 0; v < 4; ++v) {
      if (v != a && v != b) r[k++] = v;
    }
    return r;
  };
  auto fourth = [](int a, int b, int c3) { return 6 - a - b - c3; };

  for (int t0 = 0; t0 < T; ++t0) {
    for (int e0 = 0; e0 < 6; ++e0) {
      if (c.slot_edge_[t0][e0] >= 0) continue;
      const int id = static_cast<int>(c.edges_.size());
      EdgeClass cls;
      const int a0 = kTetEdges[e0][0], b0 = kTetEdges[e0][1];
      const auto oth = other_two(a0, b0);

      auto claim = [&](const OrientedSlot& s) {
        int& slot = c.slot_edge_[s.tet][s.edge()];
        if (slot >= 0) {
          throw ValidationError("edge orbit through tet " + std::to_string(s.tet) + " is inconsistent", s.tet, -1);
        }
        slot = id;
      };

      std::vector<OrientedSlot> forward{{t0, a0, b0}};
      claim(forward.back());
      WalkState st{t0, a0, b0, oth[0]};
      bool closed = false;
      int end_tet = -1, end_face = -1;
      while (true) {
        const auto& gl = g.faces[st.tet][st.exit_opp];
        if (!gl) {
          end_tet = st.tet;
          end_face = st.exit_opp;
          break;
        }
        const Perm& p = gl->perm;
        const int d = fourth(st.a, st.b, st.exit_opp);
        WalkState nx{gl->tet, p[st.a], p[st.b], p[d]};
        if (nx.tet == t0 && tet_edge_index(nx.a, nx.b) == e0) {
          if (nx.a != a0 || nx.exit_opp != oth[0]) {
            throw ValidationError("edge of tet " + std::to_string(t0) + " is identified with itself reversed", st.tet,
                                  st.exit_opp);
          }
          closed = true;
          break;
        }
        forward.push_back({nx.tet, nx.a, nx.b});
        claim(forward.back());
        st = nx;
      }

      if (closed) {
        cls.boundary = false;
        cls.slots = std::move(forward);
      } else {
        std::vector<OrientedSlot> backward;
        WalkState bs{t0, a0, b0, oth[1]};
        int start_tet = -1, start_face = -1;
        while (true) {
          const auto& gl = g.faces[bs.tet][bs.exit_opp];
          if (!gl) {
            start_tet = bs.tet;
            start_face = bs.exit_opp;
            break;
          }
          const Perm& p = gl->perm;
          const int d = fourth(bs.a, bs.b, bs.exit_opp);
          WalkState nx{gl->tet, p[bs.a], p[bs.b], p[d]};
          backward.push_back({nx.tet, nx.a, nx.b});
          claim(backward.back());
          bs = nx;
        }
        cls.boundary = true;
        cls.slots.assign(backward.rbegin(), backward.rend());
        cls.slots.insert(cls.slots.end(), forward.begin(), forward.end());
        cls.start_tet = start_tet;
        cls.start_face = start_face;
        cls.end_tet = end_tet;
        cls.end_face = end_face;
      }
      cls.tail_vertex = c.slot_vertex_[t0][a0];
      cls.head_vertex = c.slot_vertex_[t0][b0];
      c.edges_.push_back(std::move(cls));
    }
  }
  for (int e = 0; e < c.num_edges(); ++e) {
    (c.edges_[e].boundary ? c.boundary_ : c.interior_).push_back(e);
  }

  // vertex links must be disks
  {
    const int V = c.num_vertices_;
    std::vector<int> corners(V, 0), ends(V, 0), free_sides(V, 0);
    for (int t = 0; t < T; ++t) {
      for (int v = 0; v < 4; ++v) {
        const int cv = c.slot_vertex_[t][v];
        ++corners[cv];
        for (int f = 0; f < 4; ++f) {
          if (f != v && !g.faces[t][f]) ++free_sides[cv];
        }
      }
    }
    for (const auto& E : c.edges_) {
      ++ends[E.tail_vertex];
      ++ends[E.head_vertex];
    }
    for (int v = 0; v < V; ++v) {
      if (free_sides[v] == 0) {
        throw ValidationError("vertex " + std::to_string(v) + " has a closed link; all vertices must lie on the boundary");
      }
      const int link_edges = (3 * corners[v] + free_sides[v]) / 2;
      const int chi = ends[v] - link_edges + corners[v];
      if (chi != 1) {
        throw ValidationError("link of vertex " + std::to_string(v) + " is not a disk (Euler characteristic " +
                              std::to_string(chi) + ")");
      }
    }
  }

  // boundary cellulation
  std::vector<std::vector<int>> faces, sides;
  for (int idx = 0; idx < static_cast<int>(c.boundary_.size()); ++idx) {
    c.edges_[c.boundary_[idx]].boundary_edge = idx;
  }
  c.boundary_edge_class_ = c.boundary_;
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < 4; ++f) {
      if (g.faces[t][f]) continue;
      const auto tri = face_vertices(f);
      std::vector<int> cyc, sd;
      for (int k = 0; k < 3; ++k) {
        const int u = tri[k], w = tri[(k + 1) % 3];
        cyc.push_back(c.slot_vertex_[t][u]);
        sd.push_back(c.edges_[c.slot_edge_[t][tet_edge_index(u, w)]].boundary_edge);
      }
      faces.push_back(std::move(cyc));
      sides.push_back(std::move(sd));
      c.boundary_face_source_.push_back({t, f});
    }
  }
  if (!faces.empty()) {
    c.bcells_ = Cellulation::from_faces(c.num_vertices_, std::move(faces), std::move(sides));
  }

  // connectivity of the tets
  detail::DisjointSets ts(T);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < 4; ++f) {
      if (g.faces[t][f]) ts.unite(t, g.faces[t][f]->tet);
    }
  }
  bool connected = true;
  for (int t = 1; t < T; ++t) connected = connected && ts.find(t) == ts.find(0);
  c.is_ball_ = connected && c.bcells_.num_faces() > 0 && c.bcells_.is_sphere();
  return c;
}

/// Euler identity 2f = 2 e_i + e_b - v.
inline bool euler_check(const ComplexCounts& n) {
  return 2 * n.tets == 2 * n.interior_edges + n.boundary_edges - n.vertices;
}

inline bool euler_check(const IdealComplex& c) { return euler_check(c.counts()); }

/// Circuits of the boundary cellulation.  Non-elementary circuits of a ball
/// are contractible; otherwise only circuits listed in `declared` (as sets of
/// edge classes) are treated as contractible.
inline CircuitEnumeration enumerate_circuits(const IdealComplex& c, int max_len = kDefaultCircuitMaxLen,
                                             const std::vector<std::vector<int>>& declared_edge_classes = {}) {
  std::vector<std::vector<int>> declared;
  for (const auto& d : declared_edge_classes) {
    std::vector<int> b;
    for (int e : d) {
      const int be = c.edge(e).boundary_edge;
      if (be < 0) throw DomainError("declared circuit contains an interior edge");
      b.push_back(be);
    }
    declared.push_back(std::move(b));
  }
  return enumerate_circuits(c.boundary(), max_len, c.is_ball(), declared);
}

}  // namespace idealhyp
