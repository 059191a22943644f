#pragma once

// Angle assignments on an ideal triangulation, prescribed edge totals and
// the linear conditions they must satisfy.

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "idealhyp/cellulation.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/loba.hpp"

namespace idealhyp {

/// One TetAngles per tetrahedron; edge e of tet t carries tets[t][angle_class(e)].
struct AngleAssignment {
  std::vector<TetAngles> tets;

  AngleAssignment() = default;
  explicit AngleAssignment(std::vector<TetAngles> t) : tets(std::move(t)) {}

  int size() const { return static_cast<int>(tets.size()); }
  double slot(int t, int e) const { return tets.at(t)[angle_class(e)]; }
};

/// Prescribed total angle per edge class.  Boundary totals are interior
/// dihedral angles; a boundary total of exactly pi marks a flat edge (a
/// diagonal inside a polygonal boundary face).
struct AngleTarget {
  std::vector<double> totals;

  /// Every interior total equals 2 pi (within `tol`).
  bool smooth(const IdealComplex& c, double tol = 1e-12) const {
    for (int e : c.interior_edges()) {
      if (std::abs(totals.at(e) - 2 * kPi) > tol) return false;
    }
    return true;
  }
};

/// Sum of the slot angles of each edge class.
inline std::vector<double> edge_angle_totals(const IdealComplex& c, const AngleAssignment& a) {
  if (a.size() != c.num_tets()) {
    throw DomainError("edge_angle_totals: assignment has " + std::to_string(a.size()) + " tets, complex has " +
                      std::to_string(c.num_tets()));
  }
  std::vector<double> totals(c.num_edges(), 0.0);
  for (int e = 0; e < c.num_edges(); ++e) {
    for (const auto& s : c.edge(e).slots) totals[e] += a.slot(s.tet, s.edge());
  }
  return totals;
}

struct Violation {
  std::string kind;   // "range", "gauss-bonnet", "elementary-circuit", "circuit", "structure"
  std::string where;  // human readable location
  double residual = 0.0;
  std::vector<int> edges;  // circuit edges, when relevant
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  bool incomplete = false;  // some conditions could not be checked exhaustively

  bool ok() const { return violations.empty(); }
  void merge(const ValidationReport& o) {
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    warnings.insert(warnings.end(), o.warnings.begin(), o.warnings.end());
    incomplete = incomplete || o.incomplete;
  }
};

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kSolverTolerance = 1e-7;

/// Checks membership of the targets in the space of admissible angles:
/// boundary totals in (0, pi], interior totals in (0, 4 pi) (warning above
/// 2 pi), and at each vertex
///   sum of exterior boundary angles = 2 pi + sum of interior angle excess.
inline ValidationReport validate_theta(const IdealComplex& c, const AngleTarget& t, double tol = kExactTolerance) {
  ValidationReport r;
  if (static_cast<int>(t.totals.size()) != c.num_edges()) {
    r.violations.push_back({"structure", "target has " + std::to_string(t.totals.size()) + " entries, complex has " +
                                             std::to_string(c.num_edges()) + " edges",
                            0.0, {}});
    return r;
  }
  for (int e = 0; e < c.num_edges(); ++e) {
    const double v = t.totals[e];
    const bool bd = c.edge(e).boundary;
    std::ostringstream where;
    where << (bd ? "boundary" : "interior") << " edge " << e;
    if (!std::isfinite(v)) {
      r.violations.push_back({"range", where.str(), v, {e}});
    } else if (bd && (v <= 0.0 || v > kPi + tol)) {
      r.violations.push_back({"range", where.str(), v <= 0.0 ? v : v - kPi, {e}});
    } else if (!bd && (v <= 0.0 || v >= 4 * kPi)) {
      r.violations.push_back({"range", where.str(), v <= 0.0 ? v : v - 4 * kPi, {e}});
    } else if (!bd && v > 2 * kPi + tol) {
      r.warnings.push_back(where.str() + " has total above 2 pi (negative cone angle deficit)");
    }
  }
  std::vector<double> residual(c.num_vertices(), -2 * kPi);
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto& E = c.edge(e);
    const double contrib = E.boundary ? kPi - t.totals[e] : -(t.totals[e] - 2 * kPi);
    residual[E.tail_vertex] += contrib;
    residual[E.head_vertex] += contrib;
  }
  for (int v = 0; v < c.num_vertices(); ++v) {
    if (std::abs(residual[v]) > tol) {
      r.violations.push_back({"gauss-bonnet", "vertex " + std::to_string(v), residual[v], {}});
    }
  }
  return r;
}

/// A boundary cellulation with exterior dihedral angles on its edges.
struct DihedralData {
  Cellulation cells;
  std::vector<double> w;
  /// Non-elementary circuits (edge sets) known to be contractible when the
  /// boundary is not a sphere.
  std::vector<std::vector<int>> declared_contractible;
  /// Cellulation edge -> edge class of the complex it came from (if any).
  std::vector<int> source_edge;
};

/// Boundary cellulation of `c` with exterior angles pi - total, merging the
/// faces on both sides of flat edges (total within `flat_tol` of pi).
inline DihedralData dihedral_data_from_totals(const IdealComplex& c, const std::vector<double>& totals,
                                              double flat_tol = 1e-12) {
  const Cellulation& B = c.boundary();
  const int nf = B.num_faces();
  detail::DisjointSets groups(nf);
  std::vector<char> flat(B.num_edges(), 0);
  for (int be = 0; be < B.num_edges(); ++be) {
    const double tot = totals.at(c.boundary_edge_class()[be]);
    if (std::abs(tot - kPi) <= flat_tol) {
      flat[be] = 1;
      groups.unite(B.edge(be).left, B.edge(be).right);
    }
  }
  std::map<int, int> group_index;
  for (int f = 0; f < nf; ++f) group_index.emplace(groups.find(f), static_cast<int>(group_index.size()));

  std::vector<int> new_edge(B.num_edges(), -1);
  DihedralData d;
  for (int be = 0; be < B.num_edges(); ++be) {
    if (flat[be]) continue;
    new_edge[be] = static_cast<int>(d.source_edge.size());
    d.source_edge.push_back(c.boundary_edge_class()[be]);
    d.w.push_back(kPi - totals.at(c.boundary_edge_class()[be]));
  }

  std::vector<std::vector<int>> faces(group_index.size()), sides(group_index.size());
  std::vector<std::multimap<int, std::pair<int, int>>> outgoing(group_index.size());  // tail -> (head, edge)
  for (int f = 0; f < nf; ++f) {
    const int gi = group_index[groups.find(f)];
    const auto& cyc = B.face(f);
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const int be = B.face_edges(f)[k];
      if (flat[be]) continue;
      outgoing[gi].emplace(cyc[k], std::pair{cyc[(k + 1) % cyc.size()], new_edge[be]});
    }
  }
  std::set<int> covered;
  for (std::size_t gi = 0; gi < outgoing.size(); ++gi) {
    auto& out = outgoing[gi];
    if (out.empty()) throw ValidationError("flat region without boundary edges");
    for (const auto& [tail, hv] : out) {
      if (out.count(tail) != 1) {
        throw ValidationError("merged boundary face is not a disk (vertex " + std::to_string(tail) + " repeats)");
      }
    }
    int start = out.begin()->first, v = start;
    do {
      auto it = out.find(v);
      if (it == out.end()) throw ValidationError("merged boundary face does not close up");
      faces[gi].push_back(v);
      sides[gi].push_back(it->second.second);
      covered.insert(v);
      v = it->second.first;
    } while (v != start && faces[gi].size() <= out.size());
    if (faces[gi].size() != out.size()) throw ValidationError("merged boundary face has several boundary cycles");
  }
  if (static_cast<int>(covered.size()) != c.num_vertices()) {
    throw ValidationError("a vertex lies in the interior of a flat boundary region");
  }
  d.cells = Cellulation::from_faces(c.num_vertices(), std::move(faces), std::move(sides));
  return d;
}

/// Checks the conditions on exterior dihedral angles of an ideal polyhedral
/// boundary: values in (0, pi); sums over elementary circuits equal 2 pi;
/// sums over contractible non-elementary circuits (up to `max_len` edges)
/// strictly exceed 2 pi; plus combinatorial sanity of the cellulation.
inline ValidationReport validate_dihedral_data(const DihedralData& d, int max_len = kDefaultCircuitMaxLen,
                                               double tol = kExactTolerance) {
  ValidationReport r;
  const Cellulation& C = d.cells;
  if (static_cast<int>(d.w.size()) != C.num_edges()) {
    r.violations.push_back({"structure", "angle vector size does not match edge count", 0.0, {}});
    return r;
  }
  for (int e = 0; e < C.num_edges(); ++e) {
    const double w = d.w[e];
    if (!(w > 0.0 && w < kPi)) r.violations.push_back({"range", "edge " + std::to_string(e), w, {e}});
  }
  for (int f = 0; f < C.num_faces(); ++f) {
    if (C.face(f).size() < 3) {
      r.violations.push_back({"structure", "face " + std::to_string(f) + " has fewer than 3 sides", 0.0, {}});
    }
  }
  std::map<std::pair<int, int>, int> endpoint_pairs;
  std::map<std::pair<int, int>, int> face_pairs;
  for (int e = 0; e < C.num_edges(); ++e) {
    const auto& E = C.edge(e);
    if (E.tail == E.head) r.violations.push_back({"structure", "edge " + std::to_string(e) + " is a loop", 0.0, {e}});
    if (E.left == E.right) {
      r.violations.push_back({"structure", "edge " + std::to_string(e) + " has the same face on both sides", 0.0, {e}});
    }
    if (++endpoint_pairs[std::minmax(E.tail, E.head)] == 2) {
      r.violations.push_back({"structure", "two edges join vertices " + std::to_string(E.tail) + " and " +
                                               std::to_string(E.head),
                              0.0, {e}});
    }
    if (E.left != E.right && ++face_pairs[std::minmax(E.left, E.right)] == 2) {
      r.violations.push_back({"structure", "faces " + std::to_string(E.left) + " and " + std::to_string(E.right) +
                                               " share more than one edge",
                              0.0, {e}});
    }
  }
  for (int v = 0; v < C.num_vertices(); ++v) {
    if (C.valence(v) < 3) {
      r.violations.push_back({"structure", "vertex " + std::to_string(v) + " has valence below 3", 0.0, {}});
    }
  }

  const bool sphere = C.is_sphere();
  const auto circuits = enumerate_circuits(C, max_len, sphere, d.declared_contractible);
  r.incomplete = circuits.incomplete;
  for (const auto& circ : circuits.circuits) {
    double sum = 0.0;
    for (int e : circ.edges) sum += d.w[e];
    if (circ.kind == CircuitKind::Elementary) {
      if (std::abs(sum - 2 * kPi) > tol) {
        r.violations.push_back({"elementary-circuit", "vertex " + std::to_string(circ.vertex), sum - 2 * kPi, circ.edges});
      }
    } else if (circ.contractible == Contractibility::Unknown) {
      r.incomplete = true;
    } else if (!(sum > 2 * kPi + tol)) {
      std::ostringstream where;
      where << "circuit {";
      for (std::size_t i = 0; i < circ.edges.size(); ++i) where << (i ? "," : "") << circ.edges[i];
      where << "}";
      r.violations.push_back({"circuit", where.str(), sum - 2 * kPi, circ.edges});
    }
  }
  if (circuits.incomplete) {
    r.warnings.push_back("circuits longer than " + std::to_string(max_len) + " edges were not examined");
  }
  return r;
}

}  // namespace idealhyp
