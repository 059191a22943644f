#pragma once

// Oriented polygonal cellulations of closed surfaces, their dual graphs and
// circuits (closed paths in the dual graph).

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idealhyp/errors.hpp"

namespace idealhyp {

/// An edge of a cellulation.  The side tail->head is read in the
/// counter-clockwise boundary of `left`, the side head->tail in `right`.
struct CellEdge {
  int tail = -1;
  int head = -1;
  int left = -1;
  int right = -1;
  int left_pos = -1;   // faces[left][left_pos] == tail
  int right_pos = -1;  // faces[right][right_pos] == head
};

/// Oriented cellulation of a closed surface.  Faces are vertex cycles in
/// counter-clockwise order; side k of face f runs from faces[f][k] to
/// faces[f][k+1].
class Cellulation {
 public:
  Cellulation() = default;

  /// Pairs sides by their endpoints.  Requires that no two edges share both
  /// endpoints.
  static Cellulation from_faces(int num_vertices, std::vector<std::vector<int>> faces) {
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::vector<int>> side_ids(faces.size());
    int next = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& cyc = faces[f];
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        const int u = cyc[k], v = cyc[(k + 1) % cyc.size()];
        const auto key = std::minmax(u, v);
        auto [it, inserted] = ids.emplace(key, next);
        if (inserted) ++next;
        side_ids[f].push_back(it->second);
      }
    }
    return from_faces(num_vertices, std::move(faces), std::move(side_ids));
  }

  /// Builds from faces and explicit edge ids for every side.  Each id must
  /// appear on exactly two sides with opposite directions.
  static Cellulation from_faces(int num_vertices, std::vector<std::vector<int>> faces,
                                std::vector<std::vector<int>> side_ids) {
    Cellulation c;
    c.num_vertices_ = num_vertices;
    c.faces_ = std::move(faces);
    c.face_edges_ = std::move(side_ids);
    if (c.face_edges_.size() != c.faces_.size()) {
      throw ValidationError("cellulation: side id table does not match faces");
    }
    int num_edges = 0;
    for (std::size_t f = 0; f < c.faces_.size(); ++f) {
      const auto& cyc = c.faces_[f];
      if (cyc.size() < 2) throw ValidationError("cellulation: face " + std::to_string(f) + " has fewer than 2 sides");
      if (c.face_edges_[f].size() != cyc.size()) throw ValidationError("cellulation: side ids do not match face size");
      for (int v : cyc) {
        if (v < 0 || v >= num_vertices) throw ValidationError("cellulation: vertex index out of range");
      }
      for (int e : c.face_edges_[f]) num_edges = std::max(num_edges, e + 1);
    }
    c.edges_.assign(num_edges, CellEdge{});
    std::vector<int> uses(num_edges, 0);
    for (int f = 0; f < static_cast<int>(c.faces_.size()); ++f) {
      const auto& cyc = c.faces_[f];
      const int n = static_cast<int>(cyc.size());
      for (int k = 0; k < n; ++k) {
        const int e = c.face_edges_[f][k];
        const int u = cyc[k], v = cyc[(k + 1) % n];
        auto& E = c.edges_[e];
        if (uses[e] == 0) {
          E.tail = u;
          E.head = v;
          E.left = f;
          E.left_pos = k;
        } else if (uses[e] == 1) {
          if (E.tail != v || E.head != u) {
            throw ValidationError("cellulation: edge " + std::to_string(e) +
                                  " is not traversed in opposite directions by its two faces");
          }
          E.right = f;
          E.right_pos = k;
        } else {
          throw ValidationError("cellulation: edge " + std::to_string(e) + " borders more than two faces");
        }
        ++uses[e];
      }
    }
    for (int e = 0; e < num_edges; ++e) {
      if (uses[e] != 2) {
        throw ValidationError("cellulation: edge " + std::to_string(e) + " does not border exactly two faces");
      }
    }
    c.build_stars();
    return c;
  }

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<int>& face(int f) const { return faces_.at(f); }
  const std::vector<int>& face_edges(int f) const { return face_edges_.at(f); }
  const CellEdge& edge(int e) const { return edges_.at(e); }
  const std::vector<CellEdge>& edges() const { return edges_; }

  /// Edges around vertex v in rotation order (an edge with both ends at v
  /// appears twice).
  const std::vector<int>& star(int v) const { return stars_.at(v); }
  int valence(int v) const { return static_cast<int>(stars_.at(v).size()); }

  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

  bool is_triangulation() const {
    return std::all_of(faces_.begin(), faces_.end(), [](const auto& f) { return f.size() == 3; });
  }

  bool connected() const {
    if (faces_.empty()) return num_vertices_ == 0;
    std::vector<int> parent(num_vertices_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : edges_) parent[find(e.tail)] = find(e.head);
    const int root = find(0);
    for (int v = 0; v < num_vertices_; ++v) {
      if (find(v) != root) return false;
    }
    return true;
  }

  /// Connected closed surface of Euler characteristic 2.
  bool is_sphere() const { return connected() && euler_characteristic() == 2; }

  /// Position of edge e among the sides of face f whose side leaves vertex
  /// `from`; used to step around a polygon.
  int other_face(int e, int f) const {
    const auto& E = edges_.at(e);
    return E.left == f ? E.right : E.left;
  }

 private:
  void build_stars() {
    stars_.assign(num_vertices_, {});
    // corner (f, k) is vertex faces[f][k]; visit each corner once.
    std::vector<std::vector<char>> seen(faces_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) seen[f].assign(faces_[f].size(), 0);
    std::vector<int> corners_per_vertex(num_vertices_, 0);
    for (const auto& cyc : faces_) {
      for (int v : cyc) ++corners_per_vertex[v];
    }
    std::vector<char> started(num_vertices_, 0);
    for (int f = 0; f < num_faces(); ++f) {
      for (int k = 0; k < static_cast<int>(faces_[f].size()); ++k) {
        if (seen[f][k]) continue;
        const int v = faces_[f][k];
        if (started[v]) {
          throw ValidationError("cellulation: link of vertex " + std::to_string(v) + " is not a single cycle");
        }
        started[v] = 1;
        int cf = f, ck = k;
        while (!seen[cf][ck]) {
          seen[cf][ck] = 1;
          // outgoing side of the corner, then cross it to the neighbouring face
          const int e = face_edges_[cf][ck];
          stars_[v].push_back(e);
          const CellEdge& E = edges_[e];
          int nf, pos;
          if (E.left == cf && E.left_pos == ck) {
            nf = E.right;
            pos = E.right_pos;  // side head->tail, i.e. w -> v
          } else {
            nf = E.left;
            pos = E.left_pos;
          }
          const int n = static_cast<int>(faces_[nf].size());
          cf = nf;
          ck = (pos + 1) % n;
          if (faces_[cf][ck] != v) throw InternalError("cellulation: rotation walk left the vertex");
        }
      }
    }
    for (int v = 0; v < num_vertices_; ++v) {
      if (corners_per_vertex[v] == 0) {
        throw ValidationError("cellulation: vertex " + std::to_string(v) + " is not on any face");
      }
    }
  }

  int num_vertices_ = 0;
  std::vector<std::vector<int>> faces_;
  std::vector<std::vector<int>> face_edges_;
  std::vector<CellEdge> edges_;
  std::vector<std::vector<int>> stars_;
};

enum class CircuitKind { Elementary, NonElementary };

/// Whether a non-elementary circuit is known to bound a disk in the
/// 3-manifold.
enum class Contractibility { Known, UserDeclared, Unknown };

/// Boundary edges whose dual edges form a closed path in the dual graph.
struct Circuit {
  std::vector<int> edges;
  CircuitKind kind = CircuitKind::NonElementary;
  int vertex = -1;  // elementary circuits: the vertex they surround
  Contractibility contractible = Contractibility::Known;
};

struct CircuitEnumeration {
  std::vector<Circuit> circuits;
  int max_len = 0;
  bool incomplete = false;  // simple cycles longer than max_len may exist
};

inline constexpr int kDefaultCircuitMaxLen = 12;

/// Elementary circuits (one per vertex) plus every simple closed path of the
/// dual graph with at most `max_len` edges that does not surround a vertex.
/// `sphere_contractible` marks non-elementary circuits as Known; otherwise
/// circuits whose edge sets appear in `declared` are UserDeclared and the
/// rest Unknown.
inline CircuitEnumeration enumerate_circuits(const Cellulation& cell, int max_len,
                                             bool sphere_contractible,
                                             const std::vector<std::vector<int>>& declared = {},
                                             std::size_t max_cycles = 2'000'000) {
  if (max_len < 2) throw DomainError("enumerate_circuits: max_len must be at least 2");
  CircuitEnumeration out;
  out.max_len = max_len;
  std::set<std::vector<int>> elementary_sets;
  for (int v = 0; v < cell.num_vertices(); ++v) {
    Circuit c;
    c.edges = cell.star(v);
    c.kind = CircuitKind::Elementary;
    c.vertex = v;
    auto key = c.edges;
    std::sort(key.begin(), key.end());
    elementary_sets.insert(key);
    out.circuits.push_back(std::move(c));
  }
  std::set<std::vector<int>> declared_sets;
  for (auto d : declared) {
    std::sort(d.begin(), d.end());
    declared_sets.insert(std::move(d));
  }

  const int nf = cell.num_faces();
  std::vector<std::vector<std::pair<int, int>>> adj(nf);  // (neighbour, edge)
  for (int e = 0; e < cell.num_edges(); ++e) {
    const auto& E = cell.edge(e);
    if (E.left == E.right) continue;
    adj[E.left].push_back({E.right, e});
    adj[E.right].push_back({E.left, e});
  }

  std::set<std::vector<int>> found;
  std::vector<int> path_edges;
  std::vector<char> on_path(nf, 0);
  std::vector<char> edge_used(cell.num_edges(), 0);
  bool overflow = false;

  auto dfs = [&](auto&& self, int start, int u) -> void {
    if (overflow) return;
    for (const auto& [w, e] : adj[u]) {
      if (edge_used[e]) continue;
      if (w == start) {
        if (static_cast<int>(path_edges.size()) + 1 <= max_len) {
          auto key = path_edges;
          key.push_back(e);
          std::sort(key.begin(), key.end());
          if (!elementary_sets.count(key)) {
            found.insert(std::move(key));
            if (found.size() >= max_cycles) overflow = true;
          }
        }
        continue;
      }
      if (w < start || on_path[w]) continue;
      if (static_cast<int>(path_edges.size()) + 1 >= max_len) continue;
      on_path[w] = 1;
      edge_used[e] = 1;
      path_edges.push_back(e);
      self(self, start, w);
      path_edges.pop_back();
      edge_used[e] = 0;
      on_path[w] = 0;
    }
  };
  for (int s = 0; s < nf && !overflow; ++s) {
    on_path[s] = 1;
    dfs(dfs, s, s);
    on_path[s] = 0;
  }

  for (const auto& key : found) {
    Circuit c;
    c.edges = key;
    c.kind = CircuitKind::NonElementary;
    if (sphere_contractible) {
      c.contractible = Contractibility::Known;
    } else if (declared_sets.count(key)) {
      c.contractible = Contractibility::UserDeclared;
    } else {
      c.contractible = Contractibility::Unknown;
    }
    out.circuits.push_back(std::move(c));
  }
  out.incomplete = overflow || max_len < nf;
  return out;
}

}  // namespace idealhyp
