#pragma once

#include <optional>
#include <vector>

#include "slopes/geometry.hpp"

namespace slopes {

/// Edge drawn as one segment or two segments joined at a single bend.
struct PolylineEdge {
  int u = -1, v = -1;
  std::optional<Point> bend;

  /// Geometry as 1 or 2 segments, oriented u -> v.
  std::vector<Segment> segments(const Point& pu, const Point& pv) const {
    if (!bend) return {{pu, pv}};
    return {{pu, *bend}, {*bend, pv}};
  }
};

struct Drawing {
  std::vector<Point> coords;  // vertex id -> position
  std::vector<PolylineEdge> edges;
  SlopeSet slope_set;
  int components = 1;

  explicit Drawing(SlopeSet ss) : slope_set(std::move(ss)) {}
};

}  // namespace slopes
