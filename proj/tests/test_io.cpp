#include <gtest/gtest.h>

#include <random>

#include "idealhyp/io.hpp"
#include "support.hpp"

using namespace idealhyp;
using namespace testsupport;

namespace {

ParseError parse_error_of(const std::string& text) {
  try {
    parse_triangulation(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError("none", 0, 0);
}

const char* kOneTet =
    "tetrahedra 1\n"
    "0 0 -> boundary\n"
    "0 1 -> boundary\n"
    "0 2 -> boundary\n"
    "0 3 -> boundary\n";

}  // namespace

TEST(AngleValues, PiNotation) {
  EXPECT_DOUBLE_EQ(*parse_angle_value("pi"), kPi);
  EXPECT_DOUBLE_EQ(*parse_angle_value("-pi/2"), -kPi / 2);
  EXPECT_DOUBLE_EQ(*parse_angle_value("2pi/3"), 2 * kPi / 3);
  EXPECT_DOUBLE_EQ(*parse_angle_value("2*pi/3"), 2 * kPi / 3);
  EXPECT_DOUBLE_EQ(*parse_angle_value("1/3"), 1.0 / 3);
  EXPECT_DOUBLE_EQ(*parse_angle_value("0.25"), 0.25);
  EXPECT_DOUBLE_EQ(*parse_angle_value("1e-2"), 0.01);
  for (const char* bad : {"", "p", "pi/0", "2pi3", "1/", "abc", "nan", "inf", "pi pi"}) {
    EXPECT_FALSE(parse_angle_value(bad).has_value()) << bad;
  }
}

TEST(Triangulation, FixturesRoundTrip) {
  for (const char* name : {"single_tet.tri", "bipyramid.tri", "octahedron_cone.tri", "degenerate.tri"}) {
    SCOPED_TRACE(name);
    const TriangulationFile f = parse_triangulation(fixture_text(name));
    const std::string text = serialize_triangulation(f);
    const TriangulationFile g = parse_triangulation(text);
    EXPECT_EQ(f, g);
    EXPECT_EQ(serialize_triangulation(g), text);
  }
}

TEST(Triangulation, RandomGluingsRoundTrip) {
  std::mt19937_64 rng(71);
  for (int n = 3; n <= 8; ++n) {
    TriangulationFile f;
    f.gluing = axis_cone(n);
    f.boundary_default = 1.0 / 3 + n;
    f.targets.push_back({{0, 0, 1}, 2 * kPi, false});
    f.targets.push_back({{n - 1, 2, 3}, std::uniform_real_distribution<double>(0, 1)(rng), true});
    f.circuits.push_back({{0, 0, 2}, {1, 1, 3}, {2, 0, 3}});
    EXPECT_EQ(parse_triangulation(serialize_triangulation(f)), f);
  }
}

TEST(Triangulation, ErrorsCarryLineAndColumn) {
  {
    const auto e = parse_error_of("tetrahedra 1\n0 0 -> boundary\n0 1 -> boundary\n0 2 -> boundary\n0 3 -> bondary\n");
    EXPECT_EQ(e.line(), 5);
  }
  {
    const auto e = parse_error_of(std::string(kOneTet) + "targets\nedge 0 0 7 pi\n");
    EXPECT_EQ(e.line(), 7);
    EXPECT_EQ(e.column(), 10);
  }
  {
    const auto e = parse_error_of(std::string(kOneTet) + "boundary_default pie\n");
    EXPECT_EQ(e.line(), 6);
    EXPECT_EQ(e.column(), 18);
  }
  {
    const auto e = parse_error_of("# comment only\n\n  tetrahedra x\n");
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 14);
  }
  {
    // face 3 missing
    const auto e = parse_error_of("tetrahedra 1\n0 0 -> boundary\n0 1 -> boundary\n0 2 -> boundary\n");
    EXPECT_NE(std::string(e.what()).find("(0,3)"), std::string::npos);
  }
  {
    const auto e = parse_error_of("tetrahedra 1\n0 0 -> boundary\n0 0 -> boundary\n");
    EXPECT_EQ(e.line(), 3);
  }
  {
    // permutation does not send face 3 to face 2
    const auto e = parse_error_of("tetrahedra 2\n0 3 -> 1 2 0123\n");
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 12);
  }
  EXPECT_EQ(parse_error_of("").line(), 1);
}

TEST(Triangulation, NonInvolutiveGluingNamesTheFace) {
  const std::string text =
      "tetrahedra 2\n"
      "0 0 -> boundary\n0 1 -> boundary\n0 2 -> boundary\n"
      "0 3 -> 1 3 1023\n"
      "1 0 -> boundary\n1 1 -> boundary\n1 2 -> boundary\n"
      "1 3 -> 0 3 2103\n";  // odd, but not the inverse of 1023
  const auto e = parse_error_of(text);
  EXPECT_TRUE(e.line() == 5 || e.line() == 9);
  const std::string msg = e.what();
  EXPECT_TRUE(msg.find("(0,3)") != std::string::npos || msg.find("(1,3)") != std::string::npos) << msg;
  EXPECT_NE(msg.find("non-involutive"), std::string::npos) << msg;
}

TEST(Targets, ResolveDefaultsAndOverrides) {
  const TriangulationFile f = parse_triangulation(fixture_text("bipyramid.tri"));
  const IdealComplex c = build_complex(f.gluing);
  const AngleTarget t = resolve_targets(f, c);
  int equator = 0;
  for (int e = 0; e < c.num_edges(); ++e) {
    if (std::abs(t.totals[e] - 2 * kPi / 3) < 1e-15) ++equator;
    else EXPECT_NEAR(t.totals[e], kPi / 3, 1e-15);
  }
  EXPECT_EQ(equator, 3);

  TriangulationFile g = f;
  g.boundary_default.reset();
  EXPECT_THROW(resolve_targets(g, c), DomainError);  // apex edges have no value
  g = f;
  g.targets.push_back({{1, 0, 1}, 1.0, false});  // same class as tet 0 edge (1,0) under 1023
  g.targets.push_back({{0, 0, 1}, 1.5, false});
  EXPECT_THROW(resolve_targets(g, c), DomainError);

  const TriangulationFile d = parse_triangulation(fixture_text("degenerate.tri"));
  const IdealComplex dc = build_complex(d.gluing);
  const AngleTarget dt = resolve_targets(d, dc);
  for (int e : dc.interior_edges()) EXPECT_NEAR(dt.totals[e], 2 * kPi, 1e-15);
  TriangulationFile bad = d;
  bad.targets.push_back({{0, 0, 1}, 0.5, true});  // the axis is interior
  EXPECT_THROW(resolve_targets(bad, dc), DomainError);
}

TEST(Graph, ParseSerializeAndOrient) {
  for (const char* name : {"k4.graph", "octahedron.graph", "icosahedron.graph"}) {
    SCOPED_TRACE(name);
    const GraphFile g = parse_graph(fixture_text(name));
    EXPECT_EQ(parse_graph(serialize_graph(g)), g);
    const Cellulation c = graph_cellulation(g);
    EXPECT_TRUE(c.is_sphere());
    EXPECT_EQ(c.num_faces(), static_cast<int>(g.faces.size()));
  }
  // a face listed backwards is reoriented
  GraphFile k4 = parse_graph(fixture_text("k4.graph"));
  std::reverse(k4.faces[2].begin(), k4.faces[2].end());
  const Cellulation c = graph_cellulation(k4);
  EXPECT_TRUE(c.is_sphere());
  EXPECT_EQ(c.face(0), k4.faces[0]);
}

TEST(Graph, Errors) {
  try {
    parse_graph("vertices 4\ntriangle 0 1 2\ntriangle 0 2 9\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 14);
  }
  EXPECT_THROW(parse_graph("vertices 4\ntriangle 0 1 1\n"), ParseError);
  EXPECT_THROW(parse_graph("vertices 4\ntriangle 0 1\n"), ParseError);
  EXPECT_THROW(parse_graph("triangle 0 1 2\n"), ParseError);
  // a disk, not a sphere
  EXPECT_THROW(graph_cellulation(parse_graph("vertices 4\ntriangle 0 1 2\ntriangle 0 2 3\n")), DomainError);
  // two disjoint tetrahedra
  EXPECT_THROW(graph_cellulation(parse_graph("vertices 8\n"
                                             "triangle 0 1 2\ntriangle 0 2 3\ntriangle 0 3 1\ntriangle 1 3 2\n"
                                             "triangle 4 5 6\ntriangle 4 6 7\ntriangle 4 7 5\ntriangle 5 7 6\n")),
               DomainError);
  // degree-2 vertices
  EXPECT_THROW(graph_cellulation(parse_graph("vertices 3\ntriangle 0 1 2\ntriangle 0 2 1\n")), DomainError);
}

TEST(Json, FormattingIsStable) {
  Json j;
  j["b"] = 0.1;
  j["a"] = std::vector<double>{1.0, 0.5};
  j["nested"] = Json::array({Json{{"x", 1}}});
  j["nan"] = std::nan("");
  const std::string s = dump_json(j);
  EXPECT_EQ(s,
            "{\n"
            "  \"b\": 0.10000000000000001,\n"
            "  \"a\": [1, 0.5],\n"
            "  \"nested\": [\n"
            "    {\n"
            "      \"x\": 1\n"
            "    }\n"
            "  ],\n"
            "  \"nan\": null\n"
            "}\n");
  EXPECT_EQ(Json::parse(s)["b"].get<double>(), 0.1);
  EXPECT_EQ(format_double(kPi), "3.1415926535897931");
}
