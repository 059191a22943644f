#pragma once

// Subcommands of the idealhyp tool.  Each command writes a JSON dump to
// `out`, a short human summary (6 significant digits) to `err`, and returns
// the process exit code: 0 success, 1 domain failure, 2 input failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idealhyp/angles.hpp"
#include "idealhyp/boundary.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/geom.hpp"
#include "idealhyp/io.hpp"
#include "idealhyp/loba.hpp"
#include "idealhyp/packing.hpp"
#include "idealhyp/solver.hpp"
#include "idealhyp/svg.hpp"
#include "idealhyp/teich.hpp"

namespace idealhyp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string six(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline Json report_json(const ValidationReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["incomplete"] = r.incomplete;
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"kind", v.kind}, {"where", v.where}, {"residual", v.residual}, {"edges", v.edges}});
  }
  j["violations"] = vs;
  j["warnings"] = r.warnings;
  return j;
}

inline Json point_json(const ProjPoint& p) {
  if (p.is_infinite()) return "infinity";
  const cplx z = p.value();
  return Json::array({z.real(), z.imag()});
}

inline Json circle_json(const Circle& k0) {
  const Circle k = k0.normalized();
  Json j;
  j["a"] = k.a;
  j["b"] = Json::array({k.b.real(), k.b.imag()});
  j["c"] = k.c;
  if (!k.is_line()) {
    j["center"] = Json::array({k.center().real(), k.center().imag()});
    j["radius"] = k.radius();
    j["disk"] = k.disk_is_bounded() ? "inside" : "outside";
  }
  const auto [centre, rho] = spherical_cap(k);
  j["sphere_center"] = Json::array({centre[0], centre[1], centre[2]});
  j["sphere_radius"] = rho;
  return j;
}

struct LoadedTriangulation {
  TriangulationFile file;
  IdealComplex complex;
};

// Parse + build; ParseError and ValidationError are input failures.
inline LoadedTriangulation load_triangulation(const std::string& text) {
  LoadedTriangulation l;
  l.file = parse_triangulation(text);
  l.complex = build_complex(l.file.gluing);
  return l;
}

inline Json validation_json(const LoadedTriangulation& l, bool& all_ok, std::ostream& err) {
  const IdealComplex& c = l.complex;
  Json j;
  const ComplexCounts n = c.counts();
  const bool euler = euler_check(n);
  j["counts"] = {{"tets", n.tets}, {"interior_edges", n.interior_edges}, {"boundary_edges", n.boundary_edges},
                 {"vertices", n.vertices}};
  j["ball"] = c.is_ball();
  j["euler_check"] = euler;
  all_ok = euler;
  if (!euler) err << "euler_check failed: 2T = 2E_int + E_bd - V does not hold\n";

  AngleTarget t;
  try {
    t = resolve_targets(l.file, c);
  } catch (const DomainError& e) {
    j["targets_error"] = e.what();
    err << "targets: " << e.what() << "\n";
    all_ok = false;
    return j;
  }
  const ValidationReport theta = validate_theta(c, t);
  j["theta"] = report_json(theta);
  all_ok = all_ok && theta.ok();

  try {
    DihedralData d = dihedral_data_from_totals(c, t.totals);
    // declared circuits: edge classes -> cellulation edges
    std::map<int, int> cell_edge;
    for (int e = 0; e < static_cast<int>(d.source_edge.size()); ++e) cell_edge[d.source_edge[e]] = e;
    for (const auto& circ : declared_circuits(l.file, c)) {
      std::vector<int> edges;
      for (int cls : circ) {
        const auto it = cell_edge.find(cls);
        if (it == cell_edge.end()) throw DomainError("declared circuit uses a flat or interior edge class " + std::to_string(cls));
        edges.push_back(it->second);
      }
      d.declared_contractible.push_back(std::move(edges));
    }
    const ValidationReport dih = validate_dihedral_data(d);
    j["dihedral"] = report_json(dih);
    all_ok = all_ok && dih.ok();
  } catch (const Error& e) {
    j["dihedral_error"] = e.what();
    err << "dihedral data: " << e.what() << "\n";
    all_ok = false;
  }
  for (const char* key : {"theta", "dihedral"}) {
    if (!j.contains(key)) continue;
    for (const auto& v : j[key]["violations"]) {
      err << key << " violation [" << v["kind"].get<std::string>() << "] " << v["where"].get<std::string>()
          << " residual " << six(v["residual"].get<double>()) << "\n";
    }
  }
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_validate(const std::string& text, std::ostream& out, std::ostream& err) {
  detail::LoadedTriangulation l;
  try {
    l = detail::load_triangulation(text);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "invalid gluing: " << e.what() << "\n";
    return kExitInput;
  }
  bool ok = false;
  Json j = detail::validation_json(l, ok, err);
  j = Json{{"command", "validate"}, {"ok", ok}, {"report", j}};
  out << dump_json(j);
  err << (ok ? "valid" : "INVALID") << "\n";
  return ok ? kExitOk : kExitDomain;
}

struct SolveCliOptions {
  double tol = 1e-10;  // projected gradient tolerance
  int max_iters = 200;
  bool dump_iterates = false;
  int threads = 0;  // 0: environment default
  std::optional<std::uint64_t> seed;  // random feasible start instead of max-min
};

inline int cmd_solve(const std::string& text, const SolveCliOptions& o, std::ostream& out, std::ostream& err) {
  detail::LoadedTriangulation l;
  try {
    l = detail::load_triangulation(text);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "invalid gluing: " << e.what() << "\n";
    return kExitInput;
  }
  const IdealComplex& c = l.complex;
  Json j;
  j["command"] = "solve";
  AngleTarget t;
  try {
    t = resolve_targets(l.file, c);
  } catch (const DomainError& e) {
    j["status"] = "InvalidTargets";
    j["error"] = e.what();
    out << dump_json(j);
    err << "targets: " << e.what() << "\n";
    return kExitDomain;
  }
  SolveOptions so;
  so.grad_tol = o.tol;
  so.max_iters = o.max_iters;
  so.threads = o.threads;
  Json iterates = Json::array();
  if (o.dump_iterates) {
    so.on_iterate = [&](int it, const std::vector<double>& x, double vol, double g) {
      iterates.push_back({{"iteration", it}, {"volume", vol}, {"gradient_norm", g}, {"angles", x}});
    };
  }
  SolvedStructure s;
  try {
    if (o.seed) {
      std::mt19937_64 rng(*o.seed);
      so.start = random_feasible_point(c, t, rng);
    }
    s = solve_structure(c, t, so);
  } catch (const InfeasibleError& e) {
    j["status"] = "Infeasible";
    j["error"] = e.what();
    j["certificate"] = e.certificate();
    out << dump_json(j);
    err << "infeasible: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    j["status"] = "Error";
    j["error"] = e.what();
    out << dump_json(j);
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  j["status"] = to_string(s.status);
  if (s.status == SolveStatus::Degenerate) {
    const Degeneracy& d = s.degeneracy;
    Json dj;
    dj["reason"] = to_string(d.reason);
    dj["detail"] = d.detail;
    dj["circuit"] = d.circuit;
    dj["circuit_sum"] = d.circuit_sum;
    dj["edges"] = d.edges;
    Json slots = Json::array();
    for (const auto& [tet, k] : d.slots) slots.push_back(Json::array({tet, k}));
    dj["slots"] = slots;
    j["degeneracy"] = dj;
  }
  j["volume"] = s.volume;
  j["iterations"] = s.iterations;
  j["gradient_norm"] = s.gradient_norm;
  j["max_shear_residual"] = s.max_shear_residual;
  j["max_total_error"] = s.max_total_error;
  Json tets = Json::array();
  for (std::size_t i = 0; i + 2 < s.angles.size(); i += 3) tets.push_back(Json::array({s.angles[i], s.angles[i + 1], s.angles[i + 2]}));
  j["angles"] = tets;
  j["targets"] = t.totals;
  j["interior_edges"] = c.interior_edges();
  j["interior_shear_residuals"] = s.interior_shear_residuals;
  j["diagnostics"] = s.diagnostics;

  if (s.status == SolveStatus::Converged) {
    try {
      j["boundary_lengths"] = lengths_from_schlafli(c, s).lengths;
    } catch (const Error& e) {
      j["boundary_lengths_error"] = e.what();
    }
    if (c.is_ball()) {
      try {
        const DevelopedComplex d = develop(c, s.assignment);
        Json vs = Json::array();
        for (const auto& p : d.vertices) vs.push_back(detail::point_json(p));
        j["developed_vertices"] = vs;
        j["max_placement_error"] = d.max_placement_error;
        j["boundary_shifts"] = boundary_shifts(c, d).shifts;
      } catch (const Error& e) {
        j["develop_error"] = e.what();
      }
    }
  }
  if (o.dump_iterates) j["iterates"] = iterates;
  out << dump_json(j);

  err << "status " << to_string(s.status);
  if (s.status == SolveStatus::Degenerate) err << " (" << to_string(s.degeneracy.reason) << ")";
  err << ", volume " << detail::six(s.volume) << ", iterations " << s.iterations << ", max shear residual "
      << detail::six(s.max_shear_residual) << "\n";
  if (s.status == SolveStatus::Degenerate) err << s.degeneracy.detail << "\n";
  return s.status == SolveStatus::Converged ? kExitOk : kExitDomain;
}

struct PackCliOptions {
  std::optional<std::string> svg_path;
  int apex = -1;
};

inline int cmd_pack(const std::string& text, const PackCliOptions& o, std::ostream& out, std::ostream& err) {
  GraphFile g;
  try {
    g = parse_graph(text);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  }
  Json j;
  j["command"] = "pack";
  PackingResult res;
  try {
    const Cellulation tri = graph_cellulation(g);
    if (o.apex >= tri.num_edges()) throw DomainError("apex out of range");
    res = koebe_pack_full(tri, o.apex);
  } catch (const Error& e) {
    j["status"] = "Failed";
    j["error"] = e.what();
    out << dump_json(j);
    err << "pack failed: " << e.what() << "\n";
    return kExitDomain;
  }
  const CircleConfig& cfg = res.normalized;
  j["status"] = "Converged";
  j["volume"] = res.solved.volume;
  j["num_circles"] = cfg.circles.size();
  Json cs = Json::array();
  for (std::size_t i = 0; i < cfg.circles.size(); ++i) {
    Json k = detail::circle_json(cfg.circles[i]);
    Json e;
    e["role"] = cfg.roles[i] == CircleRole::White ? "White" : "Black";
    e["source"] = cfg.source[i];
    for (auto it = k.begin(); it != k.end(); ++it) e[it.key()] = it.value();
    cs.push_back(e);
  }
  j["circles"] = cs;
  Json inc = Json::array();
  for (const auto& in : cfg.incidences) {
    inc.push_back({{"i", in.i}, {"j", in.j}, {"tangent", in.tangent}, {"residual", incidence_residual(cfg, in)}});
  }
  j["incidences"] = inc;
  const double tang = max_incidence_residual(cfg, true);
  const double cross = max_incidence_residual(cfg, false);
  j["max_tangency_residual"] = tang;
  j["max_orthogonality_residual"] = cross;
  j["max_concyclic_error"] = res.max_concyclic_error;
  out << dump_json(j);
  if (o.svg_path) {
    std::ofstream f(*o.svg_path, std::ios::binary);
    if (!f) {
      err << "cannot write '" << *o.svg_path << "'\n";
      return kExitInput;
    }
    f << emit_svg(cfg);
  }
  err << cfg.circles.size() << " circles, max tangency residual " << detail::six(tang) << ", max orthogonality residual "
      << detail::six(cross) << "\n";
  return kExitOk;
}

inline int cmd_holonomy(std::ostream& out, std::ostream& err) {
  const Mat2<Rational> m = pentagon_holonomy<Rational>();
  const Rational det = det2(m);
  auto over32 = [](const Rational& r) {
    const Rational s = r * 32;
    if (denominator(s) != 1) return r.str();
    return numerator(s).str() + "/32";
  };
  Json j;
  j["command"] = "holonomy";
  j["cell"] = "pentagon";
  j["matrix"] = Json::array({Json::array({over32(m[0][0]), over32(m[0][1])}), Json::array({over32(m[1][0]), over32(m[1][1])})});
  j["matrix_reduced"] = Json::array({Json::array({m[0][0].str(), m[0][1].str()}), Json::array({m[1][0].str(), m[1][1].str()})});
  j["det"] = det.str();
  const Mat2<Rational> q = quad_pair_holonomy<Rational>();
  j["quad_pair_matrix"] = Json::array({Json::array({q[0][0].str(), q[0][1].str()}), Json::array({q[1][0].str(), q[1][1].str()})});
  out << dump_json(j);
  err << "pentagon holonomy [[" << over32(m[0][0]) << ", " << over32(m[0][1]) << "], [" << over32(m[1][0]) << ", "
      << over32(m[1][1]) << "]], det " << det.str() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Schlaefli check on random ideal tetrahedra

struct SchlafliSample {
  TetAngles angles;
  std::array<double, 3> direction{};  // tangent: sums to 0
  double dv = 0.0;          // finite difference directional derivative
  double predicted = 0.0;   // -1/2 sum L_e dtheta_e
  double rel_error = 0.0;
};

struct SchlafliReport {
  std::vector<SchlafliSample> samples;
  double max_rel_error = 0.0;
};

inline SchlafliReport schlafli_check(int n, std::uint64_t seed) {
  if (n < 0) throw DomainError("schlafli_check: negative sample count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> deco(0.5, 2.0);
  SchlafliReport rep;
  while (static_cast<int>(rep.samples.size()) < n) {
    double u = unif(rng), v = unif(rng);
    if (u > v) std::swap(u, v);
    const double a = kPi * u, b = kPi * (v - u), c = kPi - a - b;
    if (std::min({a, b, c}) < 0.05) continue;
    SchlafliSample s;
    s.angles = TetAngles::make(a, b, c);
    double d0 = unif(rng) - 0.5, d1 = unif(rng) - 0.5;
    s.direction = {d0, d1, -d0 - d1};
    const double nrm = std::sqrt(d0 * d0 + d1 * d1 + (d0 + d1) * (d0 + d1));
    for (double& x : s.direction) x /= nrm;
    // fourth order central difference
    const double h = 1e-3;
    auto vol = [&](double t) {
      return tet_volume(TetAngles::make(a + t * s.direction[0], b + t * s.direction[1], c + t * s.direction[2]));
    };
    s.dv = (-vol(2 * h) + 8 * vol(h) - 8 * vol(-h) + vol(-2 * h)) / (12 * h);
    HoroChoice horo;
    for (double& x : horo.decoration) x = deco(rng);
    const ShapeParam z = shape_from_angles(s.angles, 0);
    double sum = 0.0;
    for (int e = 0; e < 6; ++e) sum += truncated_edge_length(z, e, horo) * s.direction[angle_class(e)];
    s.predicted = -0.5 * sum;
    s.rel_error = std::abs(s.dv - s.predicted) / std::max({std::abs(s.dv), std::abs(s.predicted), 1e-12});
    rep.max_rel_error = std::max(rep.max_rel_error, s.rel_error);
    rep.samples.push_back(s);
  }
  return rep;
}

inline int cmd_schlafli_check(int samples, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  SchlafliReport rep;
  try {
    rep = schlafli_check(samples, seed);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  Json j;
  j["command"] = "schlafli-check";
  j["samples"] = samples;
  j["seed"] = seed;
  j["max_relative_error"] = rep.max_rel_error;
  Json list = Json::array();
  for (const auto& s : rep.samples) {
    list.push_back({{"angles", Json::array({s.angles.alpha, s.angles.beta, s.angles.gamma})},
                    {"direction", s.direction},
                    {"dV", s.dv},
                    {"predicted", s.predicted},
                    {"relative_error", s.rel_error}});
  }
  j["results"] = list;
  out << dump_json(j);
  err << samples << " samples, max relative error " << detail::six(rep.max_rel_error) << "\n";
  return kExitOk;
}

}  // namespace idealhyp
