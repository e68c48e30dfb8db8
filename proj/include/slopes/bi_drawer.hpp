#pragma once

#include <map>
#include <optional>
#include <vector>

#include "slopes/chip.hpp"
#include "slopes/decomposition.hpp"
#include "slopes/drawing.hpp"
#include "slopes/graph.hpp"

namespace slopes {

struct DegreeBudgetExceeded : GraphError {
  using GraphError::GraphError;
};

/// Stack parallel split components sharing a pole pair: children bottom to
/// top, left sides aligned, right pin stubs elongated to the common right
/// side. A real parallel pole-pole edge is not part of the stack; the caller
/// routes it when placing the composed chip.
Chip compose_P(const std::vector<Chip>& children, int s_pole, int t_pole, const SlopeSet& ss);

/// Compose a path of split components: chain = s, u_1, ..., u_{h-1}, t along a
/// horizontal line, children[i] riding edge (chain[i], chain[i+1]) (empty chip
/// plus real flag for a plain edge). Child chips sit above the line, lifted
/// when a real edge runs underneath; the pole edges become the pins.
Chip compose_S(const std::vector<int>& chain, const std::vector<EdgePayload>& children,
               const SlopeSet& ss);

/// Draw a triconnected skeleton (including the pole edge (s, t), which fixes
/// the base pair but is never drawn) with child chips riding the virtual
/// edges, then strip the poles into pins.
Chip compose_R(const Graph& skel, int s_pole, int t_pole,
               const std::map<std::pair<int, int>, EdgePayload>& payloads, const SlopeSet& ss);

/// Draw a biconnected graph on the slope set: decompose into triconnected
/// components, compose chips bottom-up, complete at the root edge. Every
/// vertex in `reserved` ends up with at least that many consecutive free rays
/// (room for other blocks at a cut vertex). When `parent_vertex` is given the
/// decomposition is rooted at an edge incident to it, so its edges end up on
/// consecutive rays. Throws NotBiconnected, or DegreeBudgetExceeded when
/// degree plus reservation exceeds the ray budget s + 1 somewhere.
Drawing draw_biconnected(const Graph& g, const SlopeSet& ss,
                         const std::map<int, int>& reserved = {},
                         std::optional<int> parent_vertex = std::nullopt);

}  // namespace slopes
