#pragma once

// SVG 1.1 picture of a circle configuration in the plane.  Output is
// byte-stable: fixed "%.6f" formatting and input order.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "idealhyp/packing.hpp"

namespace idealhyp {

struct SvgOptions {
  double size = 800.0;    // width and height in px
  double margin = 0.08;   // fraction of the viewport added on each side
  double stroke = 1.5;    // px
  bool draw_points = true;
  /// Circles with radius beyond this multiple of the view are drawn as lines.
  double line_radius_factor = 1e4;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);  // no "-0.000000"
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace detail

inline std::string emit_svg(const CircleConfig& cfg, const SvgOptions& opt = {}) {
  using detail::svg_num;
  // world box: bounded White circles, then anything bounded, then the unit box
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto extend = [&](double cx, double cy, double r) {
    x0 = std::min(x0, cx - r);
    x1 = std::max(x1, cx + r);
    y0 = std::min(y0, cy - r);
    y1 = std::max(y1, cy + r);
  };
  for (int pass = 0; pass < 2 && x0 > x1; ++pass) {
    for (std::size_t i = 0; i < cfg.circles.size(); ++i) {
      const Circle& k = cfg.circles[i];
      if (k.is_line() || (pass == 0 && cfg.roles[i] != CircleRole::White)) continue;
      if (!std::isfinite(k.radius()) || k.radius() > 1e6) continue;
      extend(k.center().real(), k.center().imag(), k.radius());
    }
  }
  if (x0 > x1) extend(0.0, 0.0, 1.0);
  const double span = std::max(x1 - x0, y1 - y0);
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const double half = 0.5 * span * (1.0 + 2.0 * opt.margin);
  const double scale = opt.size / (2.0 * half);
  // world (x, y) -> pixel (X, Y), y pointing up in the world
  auto X = [&](double x) { return (x - cx + half) * scale; };
  auto Y = [&](double y) { return (cy + half - y) * scale; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + svg_num(opt.size) + "\" height=\"" +
       svg_num(opt.size) + "\" viewBox=\"0 0 " + svg_num(opt.size) + " " + svg_num(opt.size) + "\">\n";
  s += "<style>.White{fill:none;stroke:#1f4e8c}.Black{fill:none;stroke:#b03a2e;stroke-dasharray:6 3}"
       ".point{fill:#222}</style>\n";
  s += "<defs><clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"" + svg_num(opt.size) + "\" height=\"" +
       svg_num(opt.size) + "\"/></clipPath></defs>\n";
  s += "<g clip-path=\"url(#view)\" stroke-width=\"" + svg_num(opt.stroke) + "\">\n";
  for (std::size_t i = 0; i < cfg.circles.size(); ++i) {
    const Circle& k = cfg.circles[i].normalized();
    const char* cls = cfg.roles[i] == CircleRole::White ? "White" : "Black";
    const std::string id = std::to_string(i);
    if (k.is_line() || k.radius() > opt.line_radius_factor * span) {
      // the line nearest to the circle: points z with Re(conj(b) z) = c/2 when a = 0
      cplx n = k.b;
      double off = 0.5 * k.c;
      if (!k.is_line()) {
        // huge circle: tangent line at the point closest to the view centre
        const cplx c0 = k.center();
        const cplx u = (cplx(cx, cy) - c0) / std::abs(cplx(cx, cy) - c0);
        const cplx p = c0 + u * k.radius();
        n = u;
        off = (std::conj(n) * p).real();
      }
      const cplx nn = n / std::abs(n);
      const cplx foot = nn * (off / std::abs(n));
      const cplx dir = cplx(0, 1) * nn;
      const cplx p = foot + dir * (4.0 * half + std::abs(foot - cplx(cx, cy)));
      const cplx q = foot - dir * (4.0 * half + std::abs(foot - cplx(cx, cy)));
      s += "<line id=\"c" + id + "\" class=\"" + cls + "\" x1=\"" + svg_num(X(p.real())) + "\" y1=\"" + svg_num(Y(p.imag())) +
           "\" x2=\"" + svg_num(X(q.real())) + "\" y2=\"" + svg_num(Y(q.imag())) + "\"/>\n";
    } else {
      s += "<circle id=\"c" + id + "\" class=\"" + cls + "\" cx=\"" + svg_num(X(k.center().real())) + "\" cy=\"" +
           svg_num(Y(k.center().imag())) + "\" r=\"" + svg_num(k.radius() * scale) + "\"/>\n";
    }
  }
  if (opt.draw_points) {
    for (const auto& p : cfg.points) {
      if (p.is_infinite()) continue;
      const cplx z = p.value();
      s += "<circle class=\"point\" cx=\"" + svg_num(X(z.real())) + "\" cy=\"" + svg_num(Y(z.imag())) + "\" r=\"" +
           svg_num(2.0 * opt.stroke) + "\"/>\n";
    }
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace idealhyp
