#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slopes/decomposition.hpp"
#include "slopes/drawing.hpp"
#include "slopes/graph.hpp"

namespace slopes {

struct MalformedDrawing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  bool pass = false;
  std::vector<std::pair<int, int>> crossing_pairs;  // indices into edges
  int max_bends = 0;
  double max_slope_deviation = 0.0;
  double min_angle = 0.0;      // over vertices of degree >= 2 and all bends
  double required_angle = 0.0;  // pi/s - tolerance
  std::string detail;
};

/// Certify the drawing guarantees: planarity, at most one bend per edge, all
/// segment slopes in the slope set (within 1e-6 rad), and angular resolution
/// at least pi/s. Coordinates are normalized to the unit bounding box before
/// the crossing predicates run.
Report verify(const Drawing& d);

/// Direct check of the four canonical-order conditions against the embedding,
/// with biconnectivity of every prefix graph tested by brute force.
bool oracle_canonical(const CanonicalOrder& order, const Embedding& e);

/// Definition-level check of an SPQR tree: expansion equals the graph, every
/// skeleton matches its declared type (R-skeletons triconnected by brute
/// force), pole consistency, and S/P adjacency parity. Budget n <= 8.
bool oracle_spqr(const SpqrTree& t, const Graph& g);

}  // namespace slopes
