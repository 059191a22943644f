#pragma once

// Shared builders for the tests: small complexes and a random generator of
// feasible targets.

#include <random>
#include <string>
#include <vector>

#include "idealhyp/angles.hpp"
#include "idealhyp/cli.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/io.hpp"
#include "idealhyp/loba.hpp"

namespace testsupport {

using namespace idealhyp;

inline std::string fixture_path(const std::string& name) { return std::string(IDEALHYP_FIXTURES) + "/" + name; }

inline std::string fixture_text(const std::string& name) { return read_text_file(fixture_path(name)); }

inline GluingData single_tet() { return GluingData(1); }

inline GluingData bipyramid() {
  GluingData g(2);
  g.glue(0, 3, 1, {1, 0, 2, 3});
  return g;
}

/// n tetrahedra (N, S, E_i, E_i+1) around the axis N-S: a cone over the
/// n-gonal bipyramid.  n = 4 is the octahedron.
inline GluingData axis_cone(int n) {
  GluingData g(n);
  for (int i = 0; i < n; ++i) g.glue(i, 3, (i + n - 1) % n, {0, 1, 3, 2});
  return g;
}

inline GluingData octahedron_cone() { return axis_cone(4); }

inline AngleTarget uniform_target(const IdealComplex& c, double boundary, double interior) {
  AngleTarget t;
  for (const auto& e : c.edges()) t.totals.push_back(e.boundary ? boundary : interior);
  return t;
}

/// Targets of a random positive assignment (so they are feasible).  For
/// axis cones the axis angles are kept summing to 2 pi.
template <class Rng>
AngleTarget random_axis_cone_target(const IdealComplex& c, int n, Rng& rng, double spread = 0.25) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> axis(n, 2 * kPi / n);
  for (int i = 0; i < n; ++i) {
    const double d = spread * (2 * kPi / n) * 0.5 * u(rng);
    axis[i] += d;
    axis[(i + 1) % n] -= d;
  }
  AngleAssignment a;
  for (int i = 0; i < n; ++i) {
    const double rest = kPi - axis[i];
    const double f = 0.5 + 0.3 * u(rng);
    a.tets.push_back(TetAngles::make(axis[i], rest * f, rest * (1 - f)));
  }
  return AngleTarget{edge_angle_totals(c, a)};
}

/// Feasible random instance drawn from the fixture family: axis cones with
/// 3..7 tets, or the bipyramid.
struct RandomInstance {
  std::string name;
  IdealComplex complex;
  AngleTarget target;
};

template <class Rng>
RandomInstance random_instance(Rng& rng) {
  std::uniform_int_distribution<int> pick(2, 7);
  const int n = pick(rng);
  RandomInstance r;
  if (n == 2) {
    r.name = "bipyramid";
    r.complex = build_complex(bipyramid());
    std::uniform_real_distribution<double> u(0.3, 1.2);
    AngleAssignment a;
    for (int i = 0; i < 2; ++i) {
      const double x = u(rng), y = u(rng);
      a.tets.push_back(TetAngles::make(x, y, kPi - x - y));
    }
    r.target = AngleTarget{edge_angle_totals(r.complex, a)};
  } else {
    r.name = "axis_cone_" + std::to_string(n);
    r.complex = build_complex(axis_cone(n));
    r.target = random_axis_cone_target(r.complex, n, rng);
  }
  return r;
}

}  // namespace testsupport
