#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "slopes/cli_io.hpp"
#include "slopes/full_drawer.hpp"
#include "slopes/verifier.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Planar one-bend drawing with equispaced slopes"};
  std::string input, json_path, svg_path;
  int delta = 0;
  unsigned seed = 0;
  bool verify_only = false;
  app.add_option("--input", input, "graph edge-list file")->required();
  auto* delta_opt = app.add_option("--delta", delta, "slope-set degree override (>= max degree)");
  app.add_option("--json", json_path, "write drawing + report as JSON");
  app.add_option("--svg", svg_path, "write drawing as SVG");
  app.add_flag("--verify", verify_only, "print the verification report to stdout");
  app.add_option("--seed", seed, "random seed (affects only generator tie-breaking)");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    slopes::Graph g = slopes::parse_graph(buf.str());
    std::optional<int> override;
    if (delta_opt->count() > 0) override = delta;
    slopes::Drawing d = slopes::draw(g, override);
    slopes::Report rep = slopes::verify(d);
    if (!json_path.empty()) {
      std::ofstream(json_path) << slopes::emit_json(d, rep);
    }
    if (!svg_path.empty()) {
      std::ofstream(svg_path) << slopes::emit_svg(d);
    }
    if (verify_only || (json_path.empty() && svg_path.empty())) {
      std::cout << (rep.pass ? "verified" : "FAILED") << ": " << d.coords.size() << " vertices, "
                << d.edges.size() << " edges, max bends " << rep.max_bends << ", min angle "
                << rep.min_angle << " (required " << rep.required_angle << ")\n";
      if (!rep.pass) std::cout << rep.detail << "\n";
    }
    return rep.pass ? 0 : 1;
  } catch (const slopes::NotPlanar& np) {
    std::cerr << "error: graph is not planar: " << np.detail << "\n";
    return 2;
  } catch (const slopes::GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
