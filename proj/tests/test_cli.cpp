#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "idealhyp/cli.hpp"
#include "support.hpp"

using namespace idealhyp;
using namespace testsupport;

namespace {

struct Captured {
  int code;
  std::string out, err;
};

template <class F>
Captured capture(F&& f) {
  std::ostringstream out, err;
  const int code = f(out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary and returns its exit status.
int run_binary(const std::string& args, std::string* stdout_text = nullptr) {
  const auto tmp = std::filesystem::temp_directory_path() / ("idealhyp_cli_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = std::string("\"") + IDEALHYP_CLI + "\" " + args + " > \"" + tmp.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) {
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    *stdout_text = ss.str();
  }
  std::filesystem::remove(tmp);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Cli, ValidateFixtures) {
  for (const char* name : {"single_tet.tri", "bipyramid.tri", "octahedron_cone.tri"}) {
    const Captured r = capture([&](auto& o, auto& e) { return cmd_validate(fixture_text(name), o, e); });
    EXPECT_EQ(r.code, kExitOk) << name << r.err;
    EXPECT_TRUE(Json::parse(r.out)["ok"].get<bool>());
  }
  const Captured d = capture([&](auto& o, auto& e) { return cmd_validate(fixture_text("degenerate.tri"), o, e); });
  EXPECT_EQ(d.code, kExitDomain);
  EXPECT_FALSE(Json::parse(d.out)["ok"].get<bool>());
}

TEST(Cli, SolveOctahedronDump) {
  const Captured r = capture([&](auto& o, auto& e) { return cmd_solve(fixture_text("octahedron_cone.tri"), {}, o, e); });
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["status"], "Converged");
  EXPECT_NEAR(j["volume"].get<double>(), 8 * lobachevsky(kPi / 4), 1e-9);
  EXPECT_LT(j["max_shear_residual"].get<double>(), 1e-8);
  EXPECT_LT(j["max_placement_error"].get<double>(), 1e-9);
  EXPECT_EQ(j["developed_vertices"].size(), 6u);
  EXPECT_EQ(j["boundary_lengths"].size(), 12u);
}

TEST(Cli, SolveWithSeedAgrees) {
  SolveCliOptions o;
  o.seed = 5;
  const Captured a = capture([&](auto& out, auto& e) { return cmd_solve(fixture_text("bipyramid.tri"), o, out, e); });
  const Captured b = capture([&](auto& out, auto& e) { return cmd_solve(fixture_text("bipyramid.tri"), {}, out, e); });
  ASSERT_EQ(a.code, kExitOk);
  ASSERT_EQ(b.code, kExitOk);
  EXPECT_NEAR(Json::parse(a.out)["volume"].get<double>(), Json::parse(b.out)["volume"].get<double>(), 1e-10);
  EXPECT_NEAR(Json::parse(b.out)["volume"].get<double>(), 2 * tet_volume(TetAngles{}), 1e-10);
}

TEST(Cli, SolveDegenerateAndInfeasible) {
  const Captured d = capture([&](auto& o, auto& e) { return cmd_solve(fixture_text("degenerate.tri"), {}, o, e); });
  EXPECT_EQ(d.code, kExitDomain);
  const Json j = Json::parse(d.out);
  EXPECT_EQ(j["status"], "Degenerate");
  EXPECT_NEAR(j["degeneracy"]["circuit_sum"].get<double>(), 2 * kPi, 1e-6);

  // angle sum over the boundary is wrong for an octahedron
  std::string text = fixture_text("octahedron_cone.tri");
  text.replace(text.find("boundary_default pi/2"), 21, "boundary_default 1.3");
  const Captured r = capture([&](auto& o, auto& e) { return cmd_solve(text, {}, o, e); });
  EXPECT_EQ(r.code, kExitDomain);
}

TEST(Cli, BadInputIsExitTwo) {
  const Captured r = capture([&](auto& o, auto& e) { return cmd_validate("tetrahedra 1\n0 0 -> nowhere\n", o, e); });
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  const Captured g = capture([&](auto& o, auto& e) { return cmd_pack("vertices 3\ntriangle 0 1 x\n", {}, o, e); });
  EXPECT_EQ(g.code, kExitInput);
  const std::string noninv =
      "tetrahedra 2\n0 0 -> boundary\n0 1 -> boundary\n0 2 -> boundary\n0 3 -> 1 3 1023\n"
      "1 0 -> boundary\n1 1 -> boundary\n1 2 -> boundary\n1 3 -> 0 3 2103\n";
  const Captured n = capture([&](auto& o, auto& e) { return cmd_solve(noninv, {}, o, e); });
  EXPECT_EQ(n.code, kExitInput);
  EXPECT_TRUE(n.err.find("(0,3)") != std::string::npos || n.err.find("(1,3)") != std::string::npos) << n.err;
}

TEST(Cli, PackAndSvg) {
  PackCliOptions o;
  o.svg_path = write_temp("k4.svg", "");
  const Captured r = capture([&](auto& out, auto& e) { return cmd_pack(fixture_text("k4.graph"), o, out, e); });
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["circles"].size(), 8u);
  EXPECT_LT(j["max_tangency_residual"].get<double>(), 1e-7);
  std::ifstream in(*o.svg_path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string svg = ss.str();
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  std::size_t whites = 0;
  for (std::size_t p = svg.find("class=\"White\""); p != std::string::npos; p = svg.find("class=\"White\"", p + 1)) ++whites;
  EXPECT_EQ(whites, 4u);
  std::filesystem::remove(*o.svg_path);

  const Captured bad = capture([&](auto& out, auto& e) {
    return cmd_pack("vertices 3\ntriangle 0 1 2\ntriangle 0 2 1\n", {}, out, e);
  });
  EXPECT_EQ(bad.code, kExitDomain);
}

TEST(Cli, HolonomyAndSchlafli) {
  const Captured h = capture([](auto& o, auto& e) { return cmd_holonomy(o, e); });
  ASSERT_EQ(h.code, kExitOk);
  const Json j = Json::parse(h.out);
  EXPECT_EQ(j["matrix"], Json::parse(R"([["28/32", "-10/32"], ["10/32", "33/32"]])"));
  EXPECT_EQ(j["det"], "1");
  const Captured s = capture([](auto& o, auto& e) { return cmd_schlafli_check(20, 3, o, e); });
  ASSERT_EQ(s.code, kExitOk);
  EXPECT_LT(Json::parse(s.out)["max_relative_error"].get<double>(), 1e-5);
}

TEST(Cli, BinaryExitCodesAndStableOutput) {
  const std::string oct = fixture_path("octahedron_cone.tri");
  std::string first, second;
  EXPECT_EQ(run_binary("solve \"" + oct + "\"", &first), 0);
  EXPECT_EQ(run_binary("solve \"" + oct + "\"", &second), 0);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
  EXPECT_EQ(run_binary("validate \"" + fixture_path("degenerate.tri") + "\""), 1);
  EXPECT_EQ(run_binary("solve \"" + fixture_path("degenerate.tri") + "\""), 1);
  EXPECT_EQ(run_binary("validate /nonexistent/file.tri"), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  const std::string bad = write_temp("bad.graph", "vertices 4\ntriangle 0 1\n");
  EXPECT_EQ(run_binary("pack \"" + bad + "\""), 2);
  std::filesystem::remove(bad);
  EXPECT_EQ(run_binary("holonomy"), 0);
}
