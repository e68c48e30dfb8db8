#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "slopes/chip.hpp"
#include "slopes/decomposition.hpp"
#include "slopes/drawing.hpp"
#include "slopes/graph.hpp"

namespace slopes {

struct RayBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incremental state of the shifting algorithm: a 1-bend planar drawing of
/// G_k minus the base edge, with the contour path from v1 to v2 and per-vertex
/// ray usage. Maintains the three loop invariants:
///   I.1  nothing below the base line through v1 and v2;
///   I.2  every contour edge has a horizontal segment;
///   I.3  every contour vertex keeps at least as many free top rays facing
///        the outer face as it has undrawn neighbors.
class PartialDrawing {
 public:
  PartialDrawing(const Graph& g, SlopeSet ss, int v1, int v2);

  /// Place the base row v1, P1..., v2 on a horizontal line, 10 units apart.
  void place_base_row(const std::vector<int>& p1);

  /// Crossed-edge list of the cut at a contour edge, starting with the edge
  /// itself and descending via down_edge links until the outer face.
  std::vector<std::pair<int, int>> compute_cut(std::pair<int, int> contour_edge) const;

  /// Lemma-1 stretch: split at the cut of `contour_edge`, translate the right
  /// side by +sigma and elongate the crossed horizontal segments.
  void stretch(std::pair<int, int> contour_edge, double sigma);

  /// Lemma-2 clearing: stretch on both sides of u until ray r of u crosses no
  /// drawn edge.
  void clear_ray(int u, int ray);

  /// Place a chain (or degree-2 singleton) on a horizontal segment spanned
  /// between the first free rays of its contour neighbors u_l and u_r.
  void place_chain(const std::vector<int>& chain, int u_l, int u_r);

  /// Place a singleton of degree >= 3 with its drawn neighbors listed in
  /// contour order.
  void place_singleton(int vi, const std::vector<int>& neighbors);

  /// Close the drawing with the base edge (v1, v2) below the base line and
  /// return the finished drawing. The partial state is consumed.
  Drawing finish();

  /// Wrap the finished construction as a chip: the base pair v1/v2 and their
  /// incident edges disappear, each far endpoint becomes a pin (its horizontal
  /// segment toward the missing pole is the stub), everything else is content.
  /// The base edge must not have been drawn, so finish() must not be called.
  Chip to_chip() const;

  // Introspection (tests and assertions).
  const std::vector<int>& contour() const { return contour_; }
  int contour_pos(int v) const;
  const std::set<int>& used_rays(int v) const { return rays_used_[static_cast<std::size_t>(v)]; }
  const Point& coord(int v) const { return coords_[static_cast<std::size_t>(v)]; }
  bool placed(int v) const { return placed_[static_cast<std::size_t>(v)]; }
  const std::map<std::pair<int, int>, EdgeGeom>& geometry() const { return edges_; }
  const SlopeSet& slopes() const { return ss_; }
  /// Free top rays of a contour vertex facing the outer face, ascending.
  std::vector<int> free_outer_rays(int v) const;
  /// Number of drawn segments properly crossed by ray r of u.
  int ray_crossing_count(int u, int ray) const;
  /// Throws InvariantViolation unless I.1-I.3 hold and the drawing is planar.
  void check_invariants() const;

  /// Declare that edge (a, b) of the construction graph stands for a
  /// decomposed child: placing it installs the chip beside/between the
  /// endpoints and fans the pertinent edges from the poles. Must be called
  /// before any placement touching the edge.
  void set_payload(int a, int b, EdgePayload p);
  /// Keep `count` extra free top rays at v on top of the I.3 demand (room for
  /// sibling blocks at a cut vertex).
  void set_reserved(int v, int count);

 private:
  friend Drawing draw_triconnected(const Embedding&, const SlopeSet&, bool);

  /// Skeleton-level record of a contour-capable edge: the old contour edge
  /// bounding its inner face from below (`down`, absent on the base row), the
  /// drawn real edges a cut crossing this edge passes through (`expansion`),
  /// and the index of an attached chip rectangle, if any.
  struct SkelRec {
    std::optional<std::pair<int, int>> down;
    std::vector<std::pair<int, int>> expansion;
    int rect = -1;
  };
  /// A placed chip's bounding box; its members translate as one rigid body.
  struct PlacedChip {
    Rect rect;
    std::vector<int> members;
  };

  static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
  const EdgeGeom& geom(int a, int b) const;
  void add_edge_geom(EdgeGeom eg);
  int succ_ray(int pos) const;  // lowest ray used toward the contour successor
  int pred_ray(int pos) const;  // highest ray used toward the contour predecessor
  double max_y() const;
  Point ray_point(int v, int ray, double at_y) const;
  std::vector<std::pair<Segment, Point>> ray_hits(int u, int ray) const;
  void mark_ray(int v, int ray);
  /// Ensure rays r_l of u_l and r_r of u_r are simultaneously clear.
  void clear_pair(int u_l, int r_l, int u_r, int r_r);
  void clear_set(const std::vector<std::pair<int, int>>& vertex_rays);
  void check_coverable(int from_pos, int to_pos) const;
  double contour_top(int from_pos, int to_pos) const;

  // Payload support.
  const EdgePayload* payload(int a, int b) const;
  /// Pertinent edge count of edge (a, b) at endpoint a (1 when no payload).
  int demand(int a, int b) const;
  bool edge_real(int a, int b) const;
  /// Undrawn-neighbor ray demand of a contour vertex, reservations included.
  int pending_demand(int v) const;
  /// Install a positioned chip: coordinates, content edges, ray usage, rect.
  int instantiate_chip(const Chip& c);
  /// Record a pole-fan edge (pin-side stub ray is pre-marked by the chip).
  void add_fan_geom(EdgeGeom eg);
  /// Horizontal clearance a fan needs next to a pole on the shelf line.
  double fan_margin() const;
  /// Place b on the line y through a (already placed), with the edge's chip
  /// between them; returns b's x. `down` seeds the new skeleton records.
  double place_flat_edge(int a, int b, double y, std::optional<std::pair<int, int>> down);
  void place_chain_general(const std::vector<int>& chain, int u_l, int u_r);
  void place_singleton_general(int vi, const std::vector<int>& nbrs);

  const Graph& g_;
  SlopeSet ss_;
  int v1_, v2_;
  std::vector<Point> coords_;
  std::vector<bool> placed_;
  std::map<std::pair<int, int>, EdgeGeom> edges_;
  std::vector<int> contour_;
  std::vector<std::set<int>> rays_used_;
  /// Explicit outer-sector boundaries per vertex: rays in (succ_b, pred_b) are
  /// the outer top sector. Kept in step with every placement instead of being
  /// recovered from edge geometry.
  std::vector<int> succ_b_, pred_b_;
  std::map<std::pair<int, int>, SkelRec> skel_;
  std::vector<PlacedChip> chip_rects_;
  std::map<std::pair<int, int>, EdgePayload> payloads_;
  std::map<int, int> reserved_;
  /// Set once payloads exist: drawn edges (chip content, fans) need not be
  /// edges of the construction graph.
  bool lenient_ = false;
};

/// Full section-3 pipeline: canonical order on the lexicographically smallest
/// outer base edge, base row, chain/singleton insertion, closing base edge.
/// With `check_each_step` the loop invariants are verified after every path.
Drawing draw_triconnected(const Embedding& e, const SlopeSet& ss, bool check_each_step = false);

}  // namespace slopes
