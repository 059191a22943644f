#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "idealhyp/teich.hpp"

using namespace idealhyp;

namespace {

Rational q(long n, long d = 1) { return Rational(n) / Rational(d); }

AngleChart<Rational> random_chart(const Cellulation& c, int e1, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 12);
  AngleChart<Rational> chart{c, {}};
  for (int e = 0; e < c.num_edges(); ++e) chart.w.push_back(q(num(rng), den(rng)));
  chart.w[e1] = -q(std::abs(num(rng)) + 1, den(rng));  // negative angle at the wall
  return chart;
}

int edge_between(const Cellulation& c, int a, int b) {
  for (int e = 0; e < c.num_edges(); ++e) {
    if (std::minmax(c.edge(e).tail, c.edge(e).head) == std::minmax(a, b)) return e;
  }
  return -1;
}

std::set<std::vector<int>> face_set(const Cellulation& c) {
  std::set<std::vector<int>> out;
  for (auto f : c.faces()) {
    std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
    out.insert(f);
  }
  return out;
}

}  // namespace

TEST(Holonomy, PentagonMatrixIsExact) {
  const auto m = pentagon_holonomy<Rational>();
  EXPECT_EQ(m[0][0], q(28, 32));
  EXPECT_EQ(m[0][1], q(-10, 32));
  EXPECT_EQ(m[1][0], q(10, 32));
  EXPECT_EQ(m[1][1], q(33, 32));
  EXPECT_EQ(det2(m), Rational(1));
  const auto md = pentagon_holonomy<double>();
  EXPECT_NEAR(det2(md), 1.0, 1e-14);
  EXPECT_NEAR(md[0][1], -10.0 / 32, 1e-15);
}

TEST(Holonomy, DisjointQuadsCommute) {
  const auto m = quad_pair_holonomy<Rational>();
  EXPECT_EQ(m[0][0], Rational(1));
  EXPECT_EQ(m[0][1], Rational(0));
  EXPECT_EQ(m[1][0], Rational(0));
  EXPECT_EQ(m[1][1], Rational(1));
}

TEST(Flip, WorkedExample) {
  const Cellulation oct = octahedron_cells();
  const int e1 = edge_between(oct, 0, 3);
  const FlipQuad g = flip_quad(oct, e1);
  AngleChart<double> chart{oct, std::vector<double>(oct.num_edges(), 0.5)};
  chart.w[e1] = -0.2;
  chart.w[g.ps] = 1.0;
  chart.w[g.sq] = 1.2;
  chart.w[g.qr] = 0.9;
  chart.w[g.rp] = 1.1;
  const auto out = flip(chart, e1, 0.1);
  EXPECT_NEAR(out.w[e1], 0.2, 1e-15);
  EXPECT_NEAR(out.w[g.ps], 0.9, 1e-15);
  EXPECT_NEAR(out.w[g.sq], 1.1, 1e-15);
  EXPECT_NEAR(out.w[g.qr], 0.8, 1e-15);
  EXPECT_NEAR(out.w[g.rp], 1.0, 1e-15);
  // the edge now joins the two opposite vertices
  EXPECT_EQ(std::minmax(out.cells.edge(e1).tail, out.cells.edge(e1).head), std::minmax(g.r, g.s));
  EXPECT_TRUE(out.cells.is_sphere());
  // the other values are untouched
  for (int e = 0; e < oct.num_edges(); ++e) {
    if (e != e1 && e != g.ps && e != g.sq && e != g.qr && e != g.rp) EXPECT_EQ(out.w[e], 0.5);
  }
  EXPECT_THROW(flip(chart, e1, 0.3), DomainError);
}

TEST(Flip, AtZeroIsCombinatorialOnly) {
  const Cellulation oct = octahedron_cells();
  const int e1 = edge_between(oct, 1, 4);
  AngleChart<Rational> chart{oct, std::vector<Rational>(oct.num_edges(), q(1, 2))};
  chart.w[e1] = 0;
  const auto out = flip_at(chart, e1);
  EXPECT_EQ(out.w, chart.w);
  EXPECT_NE(out.cells.faces(), chart.cells.faces());
}

TEST(Flip, FlipBackIsIdentity) {
  std::mt19937_64 rng(61);
  const Cellulation oct = octahedron_cells();
  for (int e1 = 0; e1 < oct.num_edges(); ++e1) {
    const auto chart = random_chart(oct, e1, rng);
    const auto back = flip_at(flip_at(chart, e1), e1);
    EXPECT_EQ(back.w, chart.w);
    // same oriented triangles, possibly in other face slots
    EXPECT_EQ(face_set(back.cells), face_set(chart.cells));
  }
}

TEST(Flip, PreservesElementaryCircuitSumsExactly) {
  std::mt19937_64 rng(62);
  const std::vector<Cellulation> bases{octahedron_cells(), pentagonal_pyramid()};
  for (const auto& base : bases) {
    for (int e1 = 0; e1 < base.num_edges(); ++e1) {
      const auto chart = random_chart(base, e1, rng);
      const Rational u = -chart.w[e1] / 2;
      const auto r = elementary_circuit_preservation(chart, e1, u);
      EXPECT_TRUE(r.preserved);
      for (const auto& x : r.residual) EXPECT_EQ(x, Rational(0));
    }
  }
}

TEST(Flip, CorruptedRuleIsDetected) {
  std::mt19937_64 rng(63);
  const Cellulation oct = octahedron_cells();
  const int e1 = edge_between(oct, 0, 2);
  const auto chart = random_chart(oct, e1, rng);
  const Rational u = -chart.w[e1] / 2;
  for (int k = 0; k < 4; ++k) {
    std::array<Rational, 4> coeff{1, 1, 1, 1};
    coeff[k] = 2;
    EXPECT_FALSE(elementary_circuit_preservation(chart, e1, u, coeff).preserved);
  }
  EXPECT_FALSE(elementary_circuit_preservation(chart, e1, u, {0, 0, 0, 0}).preserved);
}

TEST(Flip, TransitionMapIsLinear) {
  std::mt19937_64 rng(64);
  const Cellulation oct = octahedron_cells();
  const int e1 = edge_between(oct, 1, 2);
  const auto x = random_chart(oct, e1, rng), y = random_chart(oct, e1, rng);
  const Rational a = q(3, 7), b = q(-5, 2);
  AngleChart<Rational> z{oct, {}};
  for (int e = 0; e < oct.num_edges(); ++e) z.w.push_back(a * x.w[e] + b * y.w[e]);
  const auto fx = flip_at(x, e1), fy = flip_at(y, e1), fz = flip_at(z, e1);
  for (int e = 0; e < oct.num_edges(); ++e) EXPECT_EQ(fz.w[e], a * fx.w[e] + b * fy.w[e]);
}

TEST(Flip, RejectsNonTriangularFaces) {
  std::vector<std::vector<int>> cube_faces{{0, 1, 2, 3}, {4, 7, 6, 5}, {0, 4, 5, 1}, {1, 5, 6, 2}, {2, 6, 7, 3}, {3, 7, 4, 0}};
  const Cellulation cube = Cellulation::from_faces(8, cube_faces);
  EXPECT_THROW(flip_quad(cube, 0), DomainError);
  EXPECT_THROW(flip_quad(octahedron_cells(), 99), DomainError);
}
