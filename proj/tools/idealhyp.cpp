#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "idealhyp/cli.hpp"

using namespace idealhyp;

namespace {

// Reads a file; unreadable input is an input failure (exit 2).
bool slurp(const std::string& path, std::string& text) {
  try {
    text = read_text_file(path);
    return true;
  } catch (const ParseError& e) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ideal hyperbolic polyhedra and 3-manifolds with polyhedral boundary"};
  app.require_subcommand(1);

  std::string file;

  auto* validate = app.add_subcommand("validate", "check gluing data and angle targets");
  validate->add_option("file", file, "triangulation file")->required();

  SolveCliOptions sopt;
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "maximise volume for the angle targets");
  solve->add_option("file", file, "triangulation file")->required();
  solve->add_option("--tol", sopt.tol, "projected gradient tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", sopt.max_iters, "iteration limit")->check(CLI::NonNegativeNumber);
  solve->add_flag("--dump-iterates", sopt.dump_iterates, "include every iterate in the dump");
  solve->add_option("--threads", sopt.threads, "worker threads (default: IDEALHYP_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
  auto* seed_opt = solve->add_option("--seed", solve_seed, "start from a random feasible point drawn with this seed");

  PackCliOptions popt;
  std::string svg;
  auto* pack = app.add_subcommand("pack", "circle packing for a triangulated sphere");
  pack->add_option("file", file, "graph file")->required();
  auto* svg_opt = pack->add_option("--svg", svg, "write an SVG picture");
  pack->add_option("--apex", popt.apex, "vertex of the augmented cellulation used as cone apex");

  app.add_subcommand("holonomy", "pentagon holonomy of the flip structure");

  int samples = 100;
  std::uint64_t seed = 1;
  auto* schl = app.add_subcommand("schlafli-check", "finite difference check of the Schlaefli formula");
  schl->add_option("--samples", samples, "number of random tetrahedra")->check(CLI::NonNegativeNumber);
  schl->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  std::string text;
  if (validate->parsed()) {
    if (!slurp(file, text)) return kExitInput;
    return cmd_validate(text, std::cout, std::cerr);
  }
  if (solve->parsed()) {
    if (!slurp(file, text)) return kExitInput;
    if (*seed_opt) sopt.seed = solve_seed;
    return cmd_solve(text, sopt, std::cout, std::cerr);
  }
  if (pack->parsed()) {
    if (!slurp(file, text)) return kExitInput;
    if (*svg_opt) popt.svg_path = svg;
    return cmd_pack(text, popt, std::cout, std::cerr);
  }
  if (schl->parsed()) return cmd_schlafli_check(samples, seed, std::cout, std::cerr);
  return cmd_holonomy(std::cout, std::cerr);
}
