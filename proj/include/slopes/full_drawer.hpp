#pragma once

#include <optional>

#include "slopes/drawing.hpp"
#include "slopes/geometry.hpp"
#include "slopes/graph.hpp"

namespace slopes {

struct DegreeOverrideTooSmall : GraphError {
  using GraphError::GraphError;
};

/// Draw a connected planar graph on the slope set. The block-cut tree is
/// traversed outward from a root block; each block is drawn by the biconnected
/// pipeline with ray reservations at its cut vertices, then every child block
/// is rotated by an exact multiple of pi/s onto a fan of free rays at its cut
/// vertex and scaled uniformly into the local clearance. Throws NotConnected.
Drawing draw_connected(const Graph& g, const SlopeSet& ss);

/// Full pipeline for any simple planar graph: slope set from the maximum
/// degree (delta_override may raise it, a too-small override throws
/// DegreeOverrideTooSmall), connected components stacked in horizontal bands
/// 10 units apart, isolated vertices placed directly. Throws NotPlanar when
/// the input has a Kuratowski subdivision.
Drawing draw(const Graph& g, std::optional<int> delta_override = std::nullopt);

}  // namespace slopes
