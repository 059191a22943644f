#include <gtest/gtest.h>

#include <random>

#include "idealhyp/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace idealhyp;
using namespace testsupport;

using oracle::max_abs;

namespace {

std::vector<double> shear_oracle(const IdealComplex& c, const std::vector<double>& x) { return oracle::shear_residuals(c, x); }
double projected_gradient_oracle(const IdealComplex& c, const std::vector<double>& x) {
  return oracle::projected_gradient(c, x);
}

}  // namespace

TEST(Oracles, ShearOracleAgreesWithLibrary) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const RandomInstance r = random_instance(rng);
    if (r.complex.interior_edges().empty()) continue;
    const auto x = random_feasible_point(r.complex, r.target, rng);
    const auto lib = interior_shear_residuals(r.complex, assignment_from_vector(x));
    const auto ref = shear_oracle(r.complex, x);
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(lib[k], ref[k], 1e-12);
    EXPECT_NEAR(projected_gradient_norm(r.complex, r.target, assignment_from_vector(x)),
                projected_gradient_oracle(r.complex, x), 1e-10);
  }
}

TEST(Solve, SingleTetIsRegular) {
  const IdealComplex c = build_complex(single_tet());
  const auto s = solve_structure(c, uniform_target(c, kPi / 3, 0));
  ASSERT_EQ(s.status, SolveStatus::Converged);
  EXPECT_NEAR(s.volume, 3 * lobachevsky(kPi / 3), 1e-12);
}

TEST(Solve, RegularOctahedron) {
  const IdealComplex c = build_complex(octahedron_cone());
  const auto s = solve_structure(c, uniform_target(c, kPi / 2, 2 * kPi));
  ASSERT_EQ(s.status, SolveStatus::Converged);
  EXPECT_NEAR(s.volume, 8 * lobachevsky(kPi / 4), 1e-10);
  EXPECT_NEAR(s.volume, 3.6638623767, 1e-7);
  EXPECT_LT(s.max_shear_residual, 1e-8);
  EXPECT_LT(max_abs(shear_oracle(c, s.angles)), 1e-8);
}

TEST(Solve, ConvergedIffCriticalPoint) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 20; ++i) {
    const RandomInstance r = random_instance(rng);
    SCOPED_TRACE(r.name);
    const auto s = solve_structure(r.complex, r.target);
    const bool critical =
        projected_gradient_oracle(r.complex, s.angles) < 1e-10 && max_abs(shear_oracle(r.complex, s.angles)) < 1e-8;
    EXPECT_EQ(s.status == SolveStatus::Converged, critical);
    EXPECT_TRUE(critical);

    // a random feasible point is not critical, and the solver refuses to
    // call it converged when given no iterations
    const auto x = random_feasible_point(r.complex, r.target, rng);
    SolveOptions opts;
    opts.start = x;
    opts.max_iters = 0;
    const auto z = solve_structure(r.complex, r.target, opts);
    const bool start_critical =
        projected_gradient_oracle(r.complex, x) < 1e-10 && max_abs(shear_oracle(r.complex, x)) < 1e-8;
    EXPECT_EQ(z.status == SolveStatus::Converged, start_critical);
  }
}

TEST(Solve, ShearVanishesExactlyWhenGradientDoes) {
  // along the path from a random start to the optimum the two criteria
  // fail together
  std::mt19937_64 rng(33);
  const IdealComplex c = build_complex(axis_cone(5));
  const AngleTarget t = random_axis_cone_target(c, 5, rng);
  SolveOptions opts;
  opts.start = random_feasible_point(c, t, rng);
  std::vector<std::pair<double, double>> path;
  opts.on_iterate = [&](int, const std::vector<double>& x, double, double) {
    path.push_back({projected_gradient_oracle(c, x), max_abs(shear_oracle(c, x))});
  };
  const auto s = solve_structure(c, t, opts);
  ASSERT_EQ(s.status, SolveStatus::Converged);
  ASSERT_FALSE(path.empty());
  for (const auto& [g, sh] : path) EXPECT_EQ(g < 1e-10, sh < 1e-8) << g << " " << sh;
}

TEST(Solve, UniqueMaximumFromRandomStarts) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomInstance r = random_instance(rng);
    SCOPED_TRACE(r.name);
    const auto ref = solve_structure(r.complex, r.target);
    ASSERT_EQ(ref.status, SolveStatus::Converged);
    for (int i = 0; i < 20; ++i) {
      SolveOptions opts;
      opts.start = random_feasible_point(r.complex, r.target, rng);
      const auto s = solve_structure(r.complex, r.target, opts);
      ASSERT_EQ(s.status, SolveStatus::Converged);
      for (std::size_t k = 0; k < s.angles.size(); ++k) EXPECT_NEAR(s.angles[k], ref.angles[k], 1e-6);
      EXPECT_NEAR(s.volume, ref.volume, 1e-10);
      EXPECT_LE(total_volume(r.complex, assignment_from_vector(opts.start)), s.volume + 1e-12);
    }
  }
}

TEST(Solve, InfeasibleTargetsCarryCertificate) {
  const IdealComplex c = build_complex(octahedron_cone());
  // totals must add up to 2 pi per tet
  try {
    solve_structure(c, uniform_target(c, kPi / 2, 3 * kPi));
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_FALSE(e.certificate().empty());
  }
  // consistent sums but a boundary edge demanding more than its tets allow
  AngleTarget t = uniform_target(c, kPi / 2, 2 * kPi);
  const int be = c.boundary_edges()[0];
  t.totals[be] = 0.0;
  EXPECT_THROW(feasible_start(c, t), InfeasibleError);
}

TEST(Solve, DegenerateCircuitFixture) {
  const TriangulationFile f = parse_triangulation(fixture_text("degenerate.tri"));
  const IdealComplex c = build_complex(f.gluing);
  const auto s = solve_structure(c, resolve_targets(f, c));
  ASSERT_EQ(s.status, SolveStatus::Degenerate);
  EXPECT_EQ(s.degeneracy.reason, DegenerateReason::CircuitSum);
  EXPECT_NEAR(s.degeneracy.circuit_sum, 2 * kPi, 1e-6);
  EXPECT_EQ(s.degeneracy.circuit.size(), 6u);
  for (int e : s.degeneracy.circuit) EXPECT_TRUE(c.edge(e).boundary);
}

TEST(Solve, NullSpaceIsOrthonormalKernel) {
  std::mt19937_64 rng(35);
  const IdealComplex c = build_complex(axis_cone(6));
  const AngleConstraints k = angle_constraints(c, random_axis_cone_target(c, 6, rng));
  const Eigen::MatrixXd N = null_space(k.A);
  EXPECT_LT((k.A * N).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((N.transpose() * N - Eigen::MatrixXd::Identity(N.cols(), N.cols())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(N.cols(), Eigen::FullPivLU<Eigen::MatrixXd>(k.A).dimensionOfKernel());
}
