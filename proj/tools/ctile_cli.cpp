#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctile/io.hpp"

int main(int argc, char** argv) {
  using namespace ctile;
  CLI::App app{"Common fundamental domains of two lattices with quadratic entries"};
  std::string input, command, svg;
  std::optional<long> max_coeff_radius;
  std::optional<std::size_t> max_pieces;
  std::optional<double> fourier_radius, tol;
  app.add_option("--input", input, "problem document (JSON)")->required();
  app.add_option("--command", command, "construct | verify | closure | transversal | modelset | gabor-gram | plot");
  app.add_option("--max-coeff-radius", max_coeff_radius, "coefficient radius cap of the equidecomposer");
  app.add_option("--max-pieces", max_pieces, "piece cap of the equidecomposer");
  app.add_option("--fourier-radius", fourier_radius, "dual-lattice radius of the Fourier check");
  app.add_option("--tol", tol, "tolerance of the Fourier and Gabor checks");
  app.add_option("--svg", svg, "write an SVG picture (d <= 2)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  auto emit = [](const Json& doc, int code) {
    std::cout << doc.dump(2) << "\n";
    return code;
  };
  std::ifstream in(input);
  if (!in) return emit(Json{{"error", "cannot read " + input}}, kInputError);
  std::stringstream buf;
  buf << in.rdbuf();

  ProblemSpec spec;
  try {
    spec = parse_problem(buf.str());
  } catch (const InputError& e) {
    return emit(Json{{"error", e.what()}}, kInputError);
  }
  if (command.empty()) command = spec.command;
  if (command.empty()) return emit(Json{{"error", "no command given"}}, kInputError);
  if (max_coeff_radius) spec.options.max_coeff_radius = *max_coeff_radius;
  if (max_pieces) spec.options.max_pieces = *max_pieces;
  if (fourier_radius) spec.options.fourier_radius = *fourier_radius;
  if (tol) spec.options.tol = *tol;

  auto t0 = std::chrono::steady_clock::now();
  RunResult r = run(command, spec, !svg.empty());
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << command << ": exit " << r.exit_code << ", " << seconds << " s\n";

  if (!svg.empty() && !r.svg.empty()) {
    std::ofstream out(svg);
    out << r.svg;
    if (!out) return emit(Json{{"error", "cannot write " + svg}}, kInputError);
  } else if (command == "plot" && r.exit_code == kPass) {
    std::cout << r.svg;
    return kPass;
  }
  return emit(r.document, r.exit_code);
}
