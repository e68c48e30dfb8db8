#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "named_graphs.hpp"
#include "slopes/tri_drawer.hpp"
#include "slopes/verifier.hpp"

using namespace slopes;
using namespace testgraphs;

namespace {

Drawing draw_checked(const Graph& g) {
  auto e = planar_embed(g);
  REQUIRE(e.has_value());
  auto ss = make_slope_set(g.max_degree());
  return draw_triconnected(*e, ss, /*check_each_step=*/true);
}

void expect_valid(const Graph& g, const Drawing& d) {
  auto rep = verify(d);
  INFO(rep.detail);
  CHECK(rep.pass);
  CHECK(rep.crossing_pairs.empty());
  CHECK(rep.max_bends <= 1);
  CHECK(rep.max_slope_deviation <= kSlopeTol);
  CHECK(rep.min_angle >= rep.required_angle - kSlopeTol);
  CHECK(d.edges.size() == static_cast<std::size_t>(g.m()));
  CHECK(d.slope_set.count() == std::max(3, g.max_degree() - 1));
}

}  // namespace

TEST_CASE("K4 drawing verifies") {
  Graph g = complete(4);
  auto d = draw_checked(g);
  expect_valid(g, d);
  // s = 3: slopes at 0, pi/3, 2pi/3 only.
  CHECK(d.slope_set.count() == 3);
}

TEST_CASE("named triconnected graphs draw cleanly") {
  for (const Graph& g : {octahedron(), cube(), icosahedron(), dodecahedron(), wheel(5), wheel(6),
                         wheel(8), prism(4), prism(5), prism(7)}) {
    auto d = draw_checked(g);
    expect_valid(g, d);
  }
}

TEST_CASE("partial drawing: base row, cuts and stretches") {
  Graph g = octahedron();
  auto e = planar_embed(g);
  REQUIRE(e.has_value());
  // Base the order on edge (0, 1) if it is outer, else fall back to the
  // full pipeline's choice; for the unit test we just need some valid base.
  auto faces = e->faces();
  auto outer = faces[static_cast<std::size_t>(e->outer_face)].boundary;
  int v1 = std::min(outer[0].first, outer[0].second);
  int v2 = std::max(outer[0].first, outer[0].second);
  auto order = canonical_order(*e, v1, v2);

  PartialDrawing pd(g, make_slope_set(g.max_degree()), order.v1, order.v2);
  std::vector<int> p1 = order.parts[1];
  if (p1.size() > 1 && !g.has_edge(order.v1, p1.front())) std::reverse(p1.begin(), p1.end());
  pd.place_base_row(p1);
  pd.check_invariants();

  const auto& ctr = pd.contour();
  REQUIRE(ctr.size() >= 3);
  // Base-row cuts consist of the contour edge alone.
  auto cut = pd.compute_cut({ctr[0], ctr[1]});
  CHECK(cut.size() == 1);

  // Stretching moves exactly the right part, by exactly sigma.
  double before_l = pd.coord(ctr[0]).x;
  double before_r = pd.coord(ctr[1]).x;
  pd.stretch({ctr[0], ctr[1]}, 7.0);
  CHECK(pd.coord(ctr[0]).x == doctest::Approx(before_l));
  CHECK(pd.coord(ctr[1]).x == doctest::Approx(before_r + 7.0));
  pd.check_invariants();

  // Zero stretch is a no-op; negative stretches are rejected.
  pd.stretch({ctr[0], ctr[1]}, 0.0);
  CHECK(pd.coord(ctr[1]).x == doctest::Approx(before_r + 7.0));
  CHECK_THROWS_AS(pd.stretch({ctr[0], ctr[1]}, -1.0), InvariantViolation);

  // Clearing an unobstructed ray leaves coordinates untouched.
  auto free = pd.free_outer_rays(ctr[1]);
  REQUIRE(!free.empty());
  CHECK(pd.ray_crossing_count(ctr[1], free[0]) == 0);
  double x = pd.coord(ctr[1]).x;
  pd.clear_ray(ctr[1], free[0]);
  CHECK(pd.coord(ctr[1]).x == doctest::Approx(x));
}

TEST_CASE("base-row vertices keep all top rays free") {
  Graph g = complete(4);
  auto e = planar_embed(g);
  REQUIRE(e.has_value());
  auto order = canonical_order(*e, 0, 1);
  PartialDrawing pd(g, make_slope_set(5), order.v1, order.v2);
  pd.place_base_row(order.parts[1]);
  // Interior base vertex: successor at ray 0, predecessor at ray s.
  int mid = pd.contour()[1];
  auto free = pd.free_outer_rays(mid);
  CHECK(static_cast<int>(free.size()) == pd.slopes().count() - 1);
}

TEST_CASE("slope set too small is rejected") {
  Graph g = icosahedron();  // max degree 5
  auto e = planar_embed(g);
  REQUIRE(e.has_value());
  CHECK_THROWS_AS(draw_triconnected(*e, make_slope_set(4)), RayBudgetExceeded);
}

namespace {

// Two content vertices joined by a horizontal edge, one pin per side.
Chip two_chip(int a, int b, int sp, int tp, const SlopeSet& ss) {
  int s = ss.count();
  Chip c;
  c.rect = {0, 0, 2, 0};
  c.s_pole = sp;
  c.t_pole = tp;
  c.coords[a] = {0, 0};
  c.coords[b] = {2, 0};
  c.content[{a, b}] = EdgeGeom{a, b, std::nullopt, std::nullopt, 0, s};
  c.left_pins = {{a}};
  c.right_pins = {{b}};
  c.rays[a] = {0, s};
  c.rays[b] = {0, s};
  return c;
}

void expect_clean_geometry(const Drawing& d) {
  auto rep = verify(d);
  INFO(rep.detail);
  CHECK(rep.crossing_pairs.empty());
  CHECK(rep.max_bends <= 1);
  CHECK(rep.max_slope_deviation <= kSlopeTol);
}

}  // namespace

TEST_CASE("payloads: chip riding a base-row edge") {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 3);
  g.add_edge(2, 3);
  auto ss = make_slope_set(5);  // s = 4
  PartialDrawing pd(g, ss, 0, 2);
  pd.set_payload(0, 1, EdgePayload{two_chip(4, 5, 0, 1, ss), true, 2, 2});
  pd.place_base_row({1});
  pd.check_invariants();
  CHECK(pd.placed(4));
  CHECK(pd.placed(5));
  // Vertex 0 spent rays 0 (edge) and 1 (pin fan); rays 2 and 3 stay free.
  CHECK(pd.free_outer_rays(0).size() == 2);

  // Stretching across the carrying edge widens the gap and keeps the chip rigid.
  double gap = pd.coord(1).x - pd.coord(0).x;
  pd.stretch({0, 1}, 5.0);
  CHECK(pd.coord(1).x - pd.coord(0).x == doctest::Approx(gap + 5.0));
  CHECK(pd.coord(5).x - pd.coord(4).x == doctest::Approx(2.0));
  pd.check_invariants();

  pd.place_singleton(3, {0, 1, 2});
  pd.check_invariants();
  auto d = pd.finish();
  CHECK(d.edges.size() == 9);  // 6 graph edges + 1 content edge + 2 fan edges
  expect_clean_geometry(d);
}

TEST_CASE("payloads: chain with end and interior chips") {
  Graph g(9);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 2);
  auto ss = make_slope_set(5);
  PartialDrawing pd(g, ss, 0, 2);
  pd.set_payload(0, 3, EdgePayload{two_chip(5, 6, 0, 3, ss), true, 2, 2});
  pd.set_payload(3, 4, EdgePayload{two_chip(7, 8, 3, 4, ss), true, 2, 2});
  pd.place_base_row({1});
  pd.check_invariants();
  pd.place_chain({3, 4}, 0, 2);
  pd.check_invariants();
  std::vector<int> want{0, 3, 4, 2};
  CHECK(pd.contour() == want);
  auto d = pd.finish();
  CHECK(d.edges.size() == 6 + 2 + 4);
  expect_clean_geometry(d);
}

TEST_CASE("payloads: virtual chain edge without a closing segment") {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(3, 2);
  auto ss = make_slope_set(5);
  PartialDrawing pd(g, ss, 0, 2);
  pd.set_payload(0, 3, EdgePayload{two_chip(4, 5, 0, 3, ss), false, 1, 1});
  pd.place_base_row({1});
  pd.place_chain({3}, 0, 2);
  pd.check_invariants();
  // The contour edge (0, 3) has no geometry of its own but still stretches.
  double gap = pd.coord(3).x - pd.coord(0).x;
  pd.stretch({0, 3}, 5.0);
  CHECK(pd.coord(3).x - pd.coord(0).x == doctest::Approx(gap + 5.0));
  pd.check_invariants();
  auto d = pd.finish();
  CHECK(d.edges.size() == 4 + 1 + 2);  // edge (0, 3) itself is never drawn
  expect_clean_geometry(d);
}

TEST_CASE("payloads: singleton with strip and end chips") {
  Graph g(10);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 3);
  g.add_edge(2, 3);
  auto ss = make_slope_set(5);
  PartialDrawing pd(g, ss, 0, 2);
  pd.set_payload(0, 3, EdgePayload{two_chip(4, 5, 0, 3, ss), true, 2, 2});
  pd.set_payload(1, 3, EdgePayload{two_chip(6, 7, 1, 3, ss), true, 2, 2});
  pd.set_payload(2, 3, EdgePayload{two_chip(8, 9, 2, 3, ss), true, 2, 2});
  pd.place_base_row({1});
  pd.check_invariants();
  pd.place_singleton(3, {0, 1, 2});
  pd.check_invariants();
  std::vector<int> want{0, 3, 2};
  CHECK(pd.contour() == want);
  auto d = pd.finish();
  CHECK(d.edges.size() == 6 + 3 + 6);
  expect_clean_geometry(d);
}

TEST_CASE("random triconnected planar graphs draw cleanly") {
  std::mt19937 rng(987123);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 4 + static_cast<int>(rng() % 22);
    Graph g = random_triconnected(n, 9, rng);
    REQUIRE(is_triconnected(g));
    auto e = planar_embed(g);
    REQUIRE(e.has_value());
    auto d = draw_triconnected(*e, make_slope_set(g.max_degree()), true);
    expect_valid(g, d);
  }
}
