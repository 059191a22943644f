#pragma once

// Text formats: triangulation files, graph files and the JSON result dump.
// Grammars are in docs/FORMATS.md.

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "idealhyp/angles.hpp"
#include "idealhyp/cellulation.hpp"
#include "idealhyp/complex.hpp"
#include "idealhyp/errors.hpp"
#include "idealhyp/loba.hpp"

namespace idealhyp {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Tokenizer

namespace detail {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

// Splits on blanks; commas are separate tokens.  '#' starts a comment.
inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char ch = line[i];
    if (ch == '#') break;
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      continue;
    }
    if (ch == ',') {
      out.push_back({",", static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ',' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) lines.push_back(cur);
  return lines;
}

inline std::optional<double> parse_plain_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline int parse_int(const Token& t, int line, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    throw ParseError(std::string("expected ") + what + ", got '" + t.text + "'", line, t.col);
  }
  return v;
}

}  // namespace detail

/// Parses an angle value: a decimal number, or a multiple of pi such as
/// "pi", "-pi/2", "2pi/3", "2*pi/3", or a fraction "1/3".
inline std::optional<double> parse_angle_value(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double sign = 1.0;
  if (s.front() == '-' || s.front() == '+') {
    if (s.front() == '-') sign = -1.0;
    s.remove_prefix(1);
  }
  double den = 1.0;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto d = detail::parse_plain_number(s.substr(slash + 1));
    if (!d || *d == 0.0 || !std::isfinite(*d)) return std::nullopt;
    den = *d;
    s = s.substr(0, slash);
  }
  double num = 1.0;
  if (const auto p = s.find("pi"); p != std::string_view::npos) {
    if (p + 2 != s.size()) return std::nullopt;
    std::string_view coef = s.substr(0, p);
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
    if (!coef.empty()) {
      const auto c = detail::parse_plain_number(coef);
      if (!c) return std::nullopt;
      num = *c;
    } else if (p != 0) {
      return std::nullopt;
    }
    num *= kPi;
  } else {
    const auto v = detail::parse_plain_number(s);
    if (!v) return std::nullopt;
    num = *v;
  }
  const double out = sign * num / den;
  if (!std::isfinite(out)) return std::nullopt;
  return out;
}

/// Number with 17 significant digits (round-trips through parse_angle_value).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Triangulation files

/// Tet edge (i, j) of tet t, naming an edge class.
struct TetEdgeRef {
  int tet = 0, i = 0, j = 1;
  friend bool operator==(const TetEdgeRef&, const TetEdgeRef&) = default;
};

struct EdgeTargetEntry {
  TetEdgeRef ref;
  double value = 0.0;
  bool exterior = false;  // value is pi minus the total
  friend bool operator==(const EdgeTargetEntry&, const EdgeTargetEntry&) = default;
};

struct TriangulationFile {
  GluingData gluing;
  std::optional<double> boundary_default, interior_default;
  std::vector<EdgeTargetEntry> targets;
  std::vector<std::vector<TetEdgeRef>> circuits;  // declared contractible

  friend bool operator==(const TriangulationFile&, const TriangulationFile&) = default;
};

inline TriangulationFile parse_triangulation(const std::string& text) {
  TriangulationFile out;
  bool have_header = false;
  std::map<std::pair<int, int>, int> face_line;
  const auto lines = detail::split_lines(text);

  auto value_at = [](const detail::Token& t, int ln) {
    const auto v = parse_angle_value(t.text);
    if (!v) throw ParseError("bad numeric value '" + t.text + "'", ln, t.col);
    return *v;
  };
  auto tet_at = [&](const detail::Token& t, int ln) {
    const int v = detail::parse_int(t, ln, "tetrahedron index");
    if (v < 0 || v >= out.gluing.num_tets) throw ParseError("tetrahedron index " + t.text + " out of range", ln, t.col);
    return v;
  };
  auto vertex_at = [](const detail::Token& t, int ln, const char* what) {
    const int v = detail::parse_int(t, ln, what);
    if (v < 0 || v > 3) throw ParseError(std::string(what) + " " + t.text + " out of range 0..3", ln, t.col);
    return v;
  };
  auto edge_ref = [&](const std::vector<detail::Token>& tk, std::size_t k, int ln) {
    TetEdgeRef r{tet_at(tk[k], ln), vertex_at(tk[k + 1], ln, "vertex"), vertex_at(tk[k + 2], ln, "vertex")};
    if (r.i == r.j) throw ParseError("edge endpoints coincide", ln, tk[k + 2].col);
    return r;
  };
  auto expect_count = [](const std::vector<detail::Token>& tk, std::size_t n, int ln, const char* form) {
    if (tk.size() != n) {
      const int col = tk.size() > n ? tk[n].col : tk.back().col + static_cast<int>(tk.back().text.size());
      throw ParseError(std::string("expected '") + form + "'", ln, col);
    }
  };

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    const auto tk = detail::tokenize(lines[li]);
    if (tk.empty()) continue;
    const std::string& kw = tk[0].text;
    if (!have_header) {
      if (kw != "tetrahedra") throw ParseError("file must start with 'tetrahedra N'", ln, tk[0].col);
      expect_count(tk, 2, ln, "tetrahedra N");
      const int n = detail::parse_int(tk[1], ln, "tetrahedron count");
      if (n <= 0) throw ParseError("tetrahedron count must be positive", ln, tk[1].col);
      out.gluing = GluingData(n);
      have_header = true;
      continue;
    }
    if (kw == "tetrahedra") throw ParseError("duplicate header", ln, tk[0].col);
    if (kw == "targets") {
      expect_count(tk, 1, ln, "targets");
    } else if (kw == "boundary_default" || kw == "interior_default") {
      expect_count(tk, 2, ln, "boundary_default VALUE");
      auto& slot = kw == "boundary_default" ? out.boundary_default : out.interior_default;
      if (slot) throw ParseError("duplicate " + kw, ln, tk[0].col);
      slot = value_at(tk[1], ln);
    } else if (kw == "edge" || kw == "exterior") {
      expect_count(tk, 5, ln, "edge T I J VALUE");
      out.targets.push_back({edge_ref(tk, 1, ln), value_at(tk[4], ln), kw == "exterior"});
    } else if (kw == "circuit") {
      std::vector<TetEdgeRef> circ;
      std::size_t k = 1;
      while (true) {
        if (k + 3 > tk.size()) {
          throw ParseError("expected 'T I J' in circuit", ln, k < tk.size() ? tk[k].col : tk.back().col);
        }
        circ.push_back(edge_ref(tk, k, ln));
        k += 3;
        if (k == tk.size()) break;
        if (tk[k].text != ",") throw ParseError("expected ',' between circuit edges", ln, tk[k].col);
        ++k;
      }
      out.circuits.push_back(std::move(circ));
    } else {
      // T F -> T2 F2 PPPP   or   T F -> boundary
      if (tk.size() < 4 || tk[2].text != "->") {
        throw ParseError("expected 'T F -> T2 F2 PERM' or 'T F -> boundary'", ln, tk[0].col);
      }
      const int t = tet_at(tk[0], ln);
      const int f = vertex_at(tk[1], ln, "face");
      if (!face_line.emplace(std::pair{t, f}, ln).second) {
        throw ParseError("face (" + std::to_string(t) + "," + std::to_string(f) + ") listed twice", ln, tk[0].col);
      }
      if (tk[3].text == "boundary") {
        expect_count(tk, 4, ln, "T F -> boundary");
        continue;
      }
      expect_count(tk, 6, ln, "T F -> T2 F2 PERM");
      const int t2 = tet_at(tk[3], ln);
      const int f2 = vertex_at(tk[4], ln, "face");
      const std::string& ps = tk[5].text;
      Perm p{};
      if (ps.size() != 4) throw ParseError("permutation must be four digits", ln, tk[5].col);
      for (int k = 0; k < 4; ++k) {
        if (ps[k] < '0' || ps[k] > '3') throw ParseError("permutation digit out of range", ln, tk[5].col + k);
        p[k] = ps[k] - '0';
      }
      if (!is_permutation(p)) throw ParseError("'" + ps + "' is not a permutation", ln, tk[5].col);
      if (p[f] != f2) {
        throw ParseError("permutation sends face " + std::to_string(f) + " to " + std::to_string(p[f]) + ", not " +
                             std::to_string(f2),
                         ln, tk[5].col);
      }
      out.gluing.faces[t][f] = Gluing{t2, f2, p};
    }
  }
  if (!have_header) throw ParseError("empty file (missing 'tetrahedra N')", static_cast<int>(lines.size()) + 1, 1);
  for (int t = 0; t < out.gluing.num_tets; ++t) {
    for (int f = 0; f < 4; ++f) {
      if (!face_line.count({t, f})) {
        throw ParseError("face (" + std::to_string(t) + "," + std::to_string(f) + ") is not listed",
                         static_cast<int>(lines.size()) + 1, 1);
      }
    }
  }
  try {
    detail::check_gluing_data(out.gluing);
  } catch (const ValidationError& e) {
    const int ln = face_line.at({e.tet(), e.face()});
    throw ParseError(e.what(), ln, 1);
  }
  return out;
}

inline std::string serialize_triangulation(const TriangulationFile& f) {
  std::ostringstream os;
  os << "tetrahedra " << f.gluing.num_tets << "\n";
  for (int t = 0; t < f.gluing.num_tets; ++t) {
    for (int k = 0; k < 4; ++k) {
      os << t << " " << k << " -> ";
      const auto& g = f.gluing.faces[t][k];
      if (!g) {
        os << "boundary\n";
        continue;
      }
      os << g->tet << " " << g->face << " ";
      for (int v : g->perm) os << v;
      os << "\n";
    }
  }
  if (f.boundary_default || f.interior_default || !f.targets.empty()) {
    os << "targets\n";
    if (f.boundary_default) os << "boundary_default " << format_double(*f.boundary_default) << "\n";
    if (f.interior_default) os << "interior_default " << format_double(*f.interior_default) << "\n";
    for (const auto& e : f.targets) {
      os << (e.exterior ? "exterior " : "edge ") << e.ref.tet << " " << e.ref.i << " " << e.ref.j << " "
         << format_double(e.value) << "\n";
    }
  }
  for (const auto& c : f.circuits) {
    os << "circuit";
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? ", " : " ") << c[k].tet << " " << c[k].i << " " << c[k].j;
    os << "\n";
  }
  return os.str();
}

inline int edge_class_of(const IdealComplex& c, const TetEdgeRef& r) { return c.edge_of(r.tet, tet_edge_index(r.i, r.j)); }

/// Total angle per edge class: defaults first, then explicit entries.
/// Missing or conflicting values are domain errors.
inline AngleTarget resolve_targets(const TriangulationFile& f, const IdealComplex& c) {
  AngleTarget t;
  t.totals.assign(c.num_edges(), std::nan(""));
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto& def = c.edge(e).boundary ? f.boundary_default : f.interior_default;
    if (def) t.totals[e] = *def;
  }
  std::map<int, double> explicit_value;
  for (const auto& entry : f.targets) {
    const int e = edge_class_of(c, entry.ref);
    if (entry.exterior && !c.edge(e).boundary) {
      throw DomainError("exterior angle given for interior edge " + std::to_string(e));
    }
    const double total = entry.exterior ? kPi - entry.value : entry.value;
    const auto [it, fresh] = explicit_value.emplace(e, total);
    if (!fresh && std::abs(it->second - total) > 1e-12) {
      throw DomainError("conflicting targets for edge class " + std::to_string(e));
    }
    t.totals[e] = total;
  }
  for (int e = 0; e < c.num_edges(); ++e) {
    if (std::isnan(t.totals[e])) throw DomainError("no target for edge class " + std::to_string(e));
  }
  return t;
}

/// Declared contractible circuits as lists of edge classes.
inline std::vector<std::vector<int>> declared_circuits(const TriangulationFile& f, const IdealComplex& c) {
  std::vector<std::vector<int>> out;
  for (const auto& circ : f.circuits) {
    std::vector<int> edges;
    for (const auto& r : circ) edges.push_back(edge_class_of(c, r));
    out.push_back(std::move(edges));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph files (cellulations of the sphere)

struct GraphFile {
  int num_vertices = 0;
  std::vector<std::vector<int>> faces;
  friend bool operator==(const GraphFile&, const GraphFile&) = default;
};

inline GraphFile parse_graph(const std::string& text) {
  GraphFile g;
  bool have_header = false;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    const auto tk = detail::tokenize(lines[li]);
    if (tk.empty()) continue;
    if (!have_header) {
      if (tk[0].text != "vertices" || tk.size() != 2) throw ParseError("file must start with 'vertices N'", ln, tk[0].col);
      g.num_vertices = detail::parse_int(tk[1], ln, "vertex count");
      if (g.num_vertices <= 0) throw ParseError("vertex count must be positive", ln, tk[1].col);
      have_header = true;
      continue;
    }
    const bool tri = tk[0].text == "triangle";
    if (!tri && tk[0].text != "face") throw ParseError("expected 'triangle A B C' or 'face A B C ...'", ln, tk[0].col);
    if (tri ? tk.size() != 4 : tk.size() < 4) {
      throw ParseError(tri ? "a triangle has exactly three vertices" : "a face has at least three vertices", ln, tk[0].col);
    }
    std::vector<int> cyc;
    for (std::size_t k = 1; k < tk.size(); ++k) {
      const int v = detail::parse_int(tk[k], ln, "vertex index");
      if (v < 0 || v >= g.num_vertices) throw ParseError("vertex index " + tk[k].text + " out of range", ln, tk[k].col);
      if (std::find(cyc.begin(), cyc.end(), v) != cyc.end()) throw ParseError("repeated vertex in face", ln, tk[k].col);
      cyc.push_back(v);
    }
    g.faces.push_back(std::move(cyc));
  }
  if (!have_header) throw ParseError("empty file (missing 'vertices N')", static_cast<int>(lines.size()) + 1, 1);
  return g;
}

inline std::string serialize_graph(const GraphFile& g) {
  std::ostringstream os;
  os << "vertices " << g.num_vertices << "\n";
  for (const auto& f : g.faces) {
    os << (f.size() == 3 ? "triangle" : "face");
    for (int v : f) os << " " << v;
    os << "\n";
  }
  return os.str();
}

/// Cellulation of the sphere described by a graph file.  Faces are
/// reoriented coherently (the first face keeps its orientation).  Throws
/// DomainError for anything that is not a cellulation of the sphere with all
/// vertex degrees at least 3.
inline Cellulation graph_cellulation(const GraphFile& g) {
  const int nf = static_cast<int>(g.faces.size());
  if (nf == 0) throw DomainError("graph: no faces");
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> sides;  // {min,max} -> (face, position)
  for (int f = 0; f < nf; ++f) {
    const auto& cyc = g.faces[f];
    for (std::size_t k = 0; k < cyc.size(); ++k) sides[std::minmax(cyc[k], cyc[(k + 1) % cyc.size()])].push_back({f, static_cast<int>(k)});
  }
  for (const auto& [key, list] : sides) {
    if (list.size() != 2) {
      throw DomainError("graph: edge " + std::to_string(key.first) + "-" + std::to_string(key.second) + " lies on " +
                        std::to_string(list.size()) + " faces; not a closed surface");
    }
  }
  // direction in which face f (with flip state) traverses the side at position k
  auto forward = [&](int f, int k, bool flipped) {
    const auto& cyc = g.faces[f];
    const int a = cyc[k], b = cyc[(k + 1) % cyc.size()];
    return flipped ? std::pair{b, a} : std::pair{a, b};
  };
  std::vector<int> flip(nf, -1);
  std::queue<int> todo;
  flip[0] = 0;
  todo.push(0);
  while (!todo.empty()) {
    const int f = todo.front();
    todo.pop();
    const auto& cyc = g.faces[f];
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const auto& list = sides[std::minmax(cyc[k], cyc[(k + 1) % cyc.size()])];
      const auto other = list[0].first == f && list[0].second == static_cast<int>(k) ? list[1] : list[0];
      const auto here = forward(f, static_cast<int>(k), flip[f]);
      const auto there_plain = forward(other.first, other.second, false);
      const int need = there_plain == here ? 1 : 0;  // neighbours must traverse the edge oppositely
      if (flip[other.first] < 0) {
        flip[other.first] = need;
        todo.push(other.first);
      } else if (flip[other.first] != need) {
        throw DomainError("graph: surface is not orientable");
      }
    }
  }
  if (std::count(flip.begin(), flip.end(), -1) > 0) throw DomainError("graph: faces do not form a connected surface");
  std::vector<std::vector<int>> faces = g.faces;
  for (int f = 0; f < nf; ++f) {
    if (flip[f]) std::reverse(faces[f].begin(), faces[f].end());
  }
  std::vector<int> degree(g.num_vertices, 0);
  for (const auto& [key, list] : sides) {
    ++degree[key.first];
    ++degree[key.second];
  }
  for (int v = 0; v < g.num_vertices; ++v) {
    if (degree[v] == 0) throw DomainError("graph: vertex " + std::to_string(v) + " is not on any face");
    if (degree[v] < 3) throw DomainError("graph: vertex " + std::to_string(v) + " has degree " + std::to_string(degree[v]) + " < 3");
  }
  Cellulation c;
  try {
    c = Cellulation::from_faces(g.num_vertices, std::move(faces));
  } catch (const ValidationError& e) {
    throw DomainError(std::string("graph: ") + e.what());
  }
  if (!c.is_sphere()) throw DomainError("graph: surface is not a sphere (Euler characteristic " + std::to_string(c.euler_characteristic()) + ")");
  return c;
}

// ---------------------------------------------------------------------------
// JSON dump with 17 significant digits and stable key order

namespace detail {

inline void write_json(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write_json(out, it.value(), indent, depth + 1);
      }
      out += nl;
      out += close;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
      out += "[";
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) {
          out += nl;
          out += pad;
        }
        first = false;
        write_json(out, x, indent, depth + 1);
      }
      if (!flat) {
        out += nl;
        out += close;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::write_json(out, j, indent, 0);
  out += "\n";
  return out;
}

}  // namespace idealhyp
