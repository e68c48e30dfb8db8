#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "slopes/geometry.hpp"

namespace slopes {

struct PreconditionUnmet : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometry of one drawn edge plus the bookkeeping needed for cuts: when a
/// contour edge is created it records the old contour edge bounding its inner
/// face from below (`down_edge`); cuts descend along these records. Base-row
/// edges have no down_edge — below them lies the outer face.
struct EdgeGeom {
  int a = -1, b = -1;
  std::optional<Point> bend;
  std::optional<std::pair<int, int>> down_edge;
  /// Ray indices occupied at the two endpoints; tracked exactly rather than
  /// recovered from coordinates, which drift once stretches accumulate.
  int ray_a = -1, ray_b = -1;
};

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Boundary connector of a chip: `vertex` is the in-chip endpoint of an edge
/// whose other endpoint is a pole. Its drawn fragment inside the chip is a
/// single horizontal stub from the vertex to the chip side, so the parent can
/// complete the edge with one ray segment and one bend (and may lengthen the
/// stub freely by widening the chip).
struct Pin {
  int vertex = -1;
};

/// Finished drawing of a split component with its two poles removed: the
/// component's vertices inside an axis-aligned box, edges toward the missing
/// left pole ending in horizontal stubs on the left side (pins), edges toward
/// the right pole on the right side. Invariants, checked by check_chip:
///   C.1  left pins all belong to `s_pole`'s edges, right pins to `t_pole`'s;
///   C.2  each pin's stub is horizontal: the in-chip endpoint has no other
///        geometry between itself and the chip side at its height;
///   C.3  the lowest pin on each non-empty side sits on the bottom side y0.
struct Chip {
  Rect rect;
  int s_pole = -1, t_pole = -1;  // poles; left pins lead to s_pole
  std::map<int, Point> coords;
  std::map<std::pair<int, int>, EdgeGeom> content;
  std::vector<Pin> left_pins, right_pins;  // each sorted bottom to top
  /// Exact ray usage at every in-chip vertex, kept in step with transforms.
  std::map<int, std::set<int>> rays;

  bool empty() const { return coords.empty(); }
  double pin_y(const Pin& p) const { return coords.at(p.vertex).y; }
};

Chip translate_chip(const Chip& c, double dx, double dy);
/// Uniform scale about the rect's bottom-left corner; factor must be > 0.
Chip scale_chip(const Chip& c, double factor);
/// Mirror left-right about the rect's vertical center line. Pin sides and the
/// pole labels swap; ray r maps to (s - r) mod 2s.
Chip hflip_chip(const Chip& c, const SlopeSet& ss);
/// Mirror top-bottom about the rect's horizontal center line. Pin sides stay,
/// per-side order reverses; ray r maps to (2s - r) mod 2s.
Chip vflip_chip(const Chip& c, const SlopeSet& ss);
/// Rotate by k slope steps (angle k*pi/s) about `center`; ray r maps to
/// (r + k) mod 2s. Stubs stop being horizontal, so the result is only for
/// final assembly, not for further chip composition.
Chip rotate_chip(const Chip& c, int k, const Point& center, const SlopeSet& ss);

/// Same chip with one side pushed outward by `extra` >= 0; only the pin stubs
/// get longer. right_side selects which side moves.
Chip widen_chip(const Chip& c, double extra, bool right_side);

/// Ensure `left_pole` supplies the chip's left pins, flipping if needed.
Chip orient_chip(const Chip& c, int left_pole, const SlopeSet& ss);

/// Throws InvariantViolation unless C.1-C.3 hold, all content slopes are
/// on-grid, every recorded ray matches its edge direction, and the content is
/// crossing-free.
void check_chip(const Chip& c, const SlopeSet& ss);

/// What a skeleton edge stands for when drawing a decomposed graph: the child
/// component's finished chip (possibly empty), whether the endpoints are also
/// joined by a real edge, and the pertinent edge count at each endpoint (the
/// ray demand). Demands are keyed by the normalized edge (min, max).
struct EdgePayload {
  Chip chip;
  bool has_real = true;
  int d_lo = 1, d_hi = 1;
};

enum class ChipSide { Left, Right };

/// Connect a pole placed at `pole_pos` to every pin on one side of the chip,
/// one edge per pin, using the given rays of the pole (any order; the routine
/// finds the planar pin/ray pairing). Each edge is a segment of its ray from
/// the pole to a bend, then the pin's horizontal stub. Throws PreconditionUnmet
/// when some ray cannot reach some stub line outside the chip, or when no
/// pairing is crossing-free.
std::vector<EdgeGeom> draw_edges_to_pole(const Chip& c, const Point& pole_pos, int pole,
                                         ChipSide side, const std::vector<int>& rays,
                                         const SlopeSet& ss);

}  // namespace slopes
