#pragma once

#include <string>

#include "slopes/drawing.hpp"
#include "slopes/graph.hpp"
#include "slopes/verifier.hpp"

namespace slopes {

struct ParseError : GraphError {
  using GraphError::GraphError;
};
struct DuplicateEdge : GraphError {
  using GraphError::GraphError;
};
struct SelfLoop : GraphError {
  using GraphError::GraphError;
};

/// Edge-list format: first line "n m", then m lines "u v" (0-indexed),
/// whitespace separated; '#' starts a comment, blank lines are skipped.
/// Throws ParseError (with line number), DuplicateEdge or SelfLoop.
Graph parse_graph(const std::string& text);

/// Canonical edge-list text; parse_graph(emit_graph(g)) reproduces g.
std::string emit_graph(const Graph& g);

/// Deterministic JSON: keys sorted, numbers fixed to 9 decimals, -0
/// normalized. Identical drawing + report give byte-identical output.
std::string emit_json(const Drawing& d, const Report& rep);

/// Static SVG 1.1: one polyline per edge, one circle per vertex, padded
/// viewBox, y axis flipped to screen orientation.
std::string emit_svg(const Drawing& d);

}  // namespace slopes
