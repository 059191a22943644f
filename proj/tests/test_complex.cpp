#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "idealhyp/complex.hpp"
#include "support.hpp"

using namespace idealhyp;
using namespace testsupport;

TEST(Perm, SignAndInverse) {
  EXPECT_EQ(perm_sign({0, 1, 2, 3}), 1);
  EXPECT_EQ(perm_sign({1, 0, 2, 3}), -1);
  EXPECT_EQ(perm_sign({1, 2, 3, 0}), -1);
  EXPECT_EQ(perm_sign({1, 0, 3, 2}), 1);
  Perm p{2, 0, 3, 1};
  const Perm q = perm_inverse(p);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(q[p[i]], i);
}

TEST(TetEdges, IndexAndAngleClass) {
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kTetEdges[e];
    EXPECT_EQ(tet_edge_index(i, j), e);
    EXPECT_EQ(tet_edge_index(j, i), e);
    // opposite edges share an angle class and are vertex-disjoint
    const auto [k, l] = kTetEdges[5 - e];
    EXPECT_EQ(angle_class(e), angle_class(5 - e));
    EXPECT_TRUE(i != k && i != l && j != k && j != l);
  }
}

namespace {

void expect_counts(const IdealComplex& c, int tets, int interior, int boundary, int vertices) {
  const auto n = c.counts();
  EXPECT_EQ(n.tets, tets);
  EXPECT_EQ(n.interior_edges, interior);
  EXPECT_EQ(n.boundary_edges, boundary);
  EXPECT_EQ(n.vertices, vertices);
  EXPECT_TRUE(euler_check(c));
}

// Every tet edge slot lies in exactly one edge class.
void expect_slots_partitioned(const IdealComplex& c) {
  std::map<std::pair<int, int>, int> seen;
  for (int e = 0; e < c.num_edges(); ++e) {
    for (const auto& s : c.edge(e).slots) {
      EXPECT_EQ(c.edge_of(s.tet, s.edge()), e);
      ++seen[{s.tet, s.edge()}];
    }
  }
  EXPECT_EQ(static_cast<int>(seen.size()), 6 * c.num_tets());
  for (const auto& [k, n] : seen) EXPECT_EQ(n, 1);
}

}  // namespace

TEST(BuildComplex, SingleTet) {
  const IdealComplex c = build_complex(single_tet());
  expect_counts(c, 1, 0, 6, 4);
  expect_slots_partitioned(c);
  EXPECT_TRUE(c.is_ball());
  EXPECT_TRUE(c.boundary().is_sphere());
  EXPECT_EQ(c.boundary().num_faces(), 4);
}

TEST(BuildComplex, Bipyramid) {
  const IdealComplex c = build_complex(bipyramid());
  expect_counts(c, 2, 0, 9, 5);
  expect_slots_partitioned(c);
  EXPECT_TRUE(c.is_ball());
  EXPECT_EQ(c.boundary().num_faces(), 6);
}

TEST(BuildComplex, OctahedronCone) {
  const IdealComplex c = build_complex(octahedron_cone());
  expect_counts(c, 4, 1, 12, 6);
  expect_slots_partitioned(c);
  EXPECT_TRUE(c.is_ball());
  const Cellulation& B = c.boundary();
  EXPECT_TRUE(B.is_sphere());
  EXPECT_EQ(B.num_faces(), 8);
  for (int v = 0; v < B.num_vertices(); ++v) EXPECT_EQ(B.valence(v), 4);
  // the axis is the interior edge and meets all four tets
  const int axis = c.interior_edges().at(0);
  EXPECT_EQ(c.edge(axis).slots.size(), 4u);
}

TEST(BuildComplex, AxisConeFamily) {
  for (int n = 3; n <= 8; ++n) {
    const IdealComplex c = build_complex(axis_cone(n));
    expect_counts(c, n, 1, 3 * n, n + 2);
    EXPECT_TRUE(c.is_ball());
  }
}

TEST(BuildComplex, BoundaryEdgeMapsAreConsistent) {
  const IdealComplex c = build_complex(octahedron_cone());
  for (int be = 0; be < c.boundary().num_edges(); ++be) {
    const int cls = c.boundary_edge_class()[be];
    EXPECT_TRUE(c.edge(cls).boundary);
    EXPECT_EQ(c.edge(cls).boundary_edge, be);
    const auto& E = c.boundary().edge(be);
    EXPECT_EQ(std::minmax(E.tail, E.head), std::minmax(c.edge(cls).tail_vertex, c.edge(cls).head_vertex));
  }
}

TEST(GluingValidation, RejectsBadGluings) {
  {
    GluingData g(2);
    g.faces[0][3] = Gluing{1, 3, {0, 1, 2, 3}};  // no partner entry
    try {
      build_complex(g);
      FAIL();
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.tet(), 0);
      EXPECT_EQ(e.face(), 3);
    }
  }
  {
    GluingData g(2);
    g.glue(0, 3, 1, {0, 1, 2, 3});  // orientation preserving
    EXPECT_THROW(build_complex(g), ValidationError);
  }
  {
    GluingData g(1);
    g.faces[0][0] = Gluing{0, 0, {0, 2, 1, 3}};  // glued to itself
    EXPECT_THROW(build_complex(g), ValidationError);
  }
  {
    GluingData g(2);
    g.faces[0][3] = Gluing{1, 2, {0, 1, 3, 2}};
    g.faces[1][2] = Gluing{0, 3, {1, 0, 3, 2}};  // not the inverse permutation
    EXPECT_THROW(build_complex(g), ValidationError);
  }
}

TEST(EulerCheck, DetectsWrongCounts) {
  EXPECT_TRUE(euler_check(ComplexCounts{1, 0, 6, 4}));
  EXPECT_FALSE(euler_check(ComplexCounts{1, 0, 6, 5}));
  EXPECT_TRUE(euler_check(ComplexCounts{4, 1, 12, 6}));
}

namespace {

// All simple cycles of a graph by brute force over vertex sequences,
// grouped by length.
std::map<int, int> simple_cycle_lengths(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::vector<int>> cycles;
  std::vector<int> path;
  auto rec = [&](auto&& self, int u) -> void {
    for (int w : adj[u]) {
      if (w == path[0] && path.size() >= 3) {
        // store the edge set, which identifies the cycle
        std::vector<int> ekey;
        for (std::size_t k = 0; k < path.size(); ++k) {
          const int a = path[k], b = path[(k + 1) % path.size()];
          ekey.push_back(std::min(a, b) * n + std::max(a, b));
        }
        std::sort(ekey.begin(), ekey.end());
        cycles.insert(ekey);
      }
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      path.push_back(w);
      self(self, w);
      path.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    rec(rec, s);
  }
  std::map<int, int> out;
  for (const auto& c : cycles) ++out[static_cast<int>(c.size())];
  return out;
}

}  // namespace

TEST(Circuits, OctahedronBoundaryMatchesCubeGraphEnumeration) {
  // the dual graph of the octahedron is the cube graph on {0,1}^3
  std::vector<std::pair<int, int>> cube;
  for (int a = 0; a < 8; ++a) {
    for (int bit = 0; bit < 3; ++bit) {
      const int b = a ^ (1 << bit);
      if (a < b) cube.push_back({a, b});
    }
  }
  const auto oracle = simple_cycle_lengths(8, cube);
  EXPECT_EQ(oracle.at(4), 6);
  EXPECT_EQ(oracle.at(6), 16);
  EXPECT_EQ(oracle.at(8), 6);

  const IdealComplex c = build_complex(octahedron_cone());
  const auto en = enumerate_circuits(c, 12);
  EXPECT_FALSE(en.incomplete);
  std::map<int, int> got;
  int elementary = 0;
  for (const auto& circ : en.circuits) {
    ++got[static_cast<int>(circ.edges.size())];
    if (circ.kind == CircuitKind::Elementary) {
      ++elementary;
      EXPECT_EQ(circ.edges.size(), 4u);
    } else {
      EXPECT_EQ(circ.contractible, Contractibility::Known);
    }
  }
  EXPECT_EQ(elementary, 6);
  EXPECT_EQ(got, oracle);
}

TEST(Circuits, LengthCapMarksIncomplete) {
  const IdealComplex c = build_complex(octahedron_cone());
  const auto en = enumerate_circuits(c, 6);
  EXPECT_TRUE(en.incomplete);
  for (const auto& circ : en.circuits) EXPECT_LE(circ.edges.size(), 6u);
  EXPECT_THROW(enumerate_circuits(c, 1), DomainError);
}
