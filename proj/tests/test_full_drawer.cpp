#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "named_graphs.hpp"
#include "slopes/full_drawer.hpp"
#include "slopes/verifier.hpp"

using namespace slopes;
using namespace testgraphs;

namespace {

void expect_valid(const Graph& g, const Drawing& d) {
  auto rep = verify(d);
  INFO(rep.detail);
  CHECK(rep.pass);
  REQUIRE(d.edges.size() == static_cast<std::size_t>(g.m()));
  auto want = g.edges();
  std::vector<std::pair<int, int>> got;
  for (const auto& pe : d.edges) got.push_back({std::min(pe.u, pe.v), std::max(pe.u, pe.v)});
  for (auto& [u, v] : want)
    if (u > v) std::swap(u, v);
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  CHECK(want == got);
}

Drawing draw_valid(const Graph& g) {
  Drawing d = draw(g);
  expect_valid(g, d);
  return d;
}

int bend_count(const Drawing& d) {
  int n = 0;
  for (const auto& e : d.edges) n += e.bend ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("stars use one straight segment per edge") {
  for (int leaves = 4; leaves <= 8; ++leaves) {
    Graph g = star(leaves);
    Drawing d = draw_valid(g);
    CHECK(bend_count(d) == 0);
    CHECK(d.slope_set.count() == std::max(3, leaves - 1));
  }
}

TEST_CASE("paths march straight without shrinking") {
  Graph g = path(6);
  Drawing d = draw_valid(g);
  CHECK(bend_count(d) == 0);
  double lo = 1e300, hi = -1e300;
  for (const Point& p : d.coords) {
    lo = std::min(lo, p.x);
    hi = std::max(hi, p.x);
  }
  // Every bridge keeps its full 10-unit length: nothing ahead of the tip.
  CHECK(hi - lo == doctest::Approx(50.0));
}

TEST_CASE("trees are drawn with straight edges only") {
  Graph g(11);  // depth-3 binary tree
  for (int v = 1; v < 11; ++v) g.add_edge(v, (v - 1) / 2);
  Drawing d = draw_valid(g);
  CHECK(bend_count(d) == 0);
}

TEST_CASE("two triangles sharing a cut vertex") {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(0, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 0);
  draw_valid(g);
}

TEST_CASE("chain of triangle blocks") {
  // Triangles glued corner to corner: 0-1-2, 2-3-4, 4-5-6.
  Graph g(7);
  for (int t = 0; t < 3; ++t) {
    int a = 2 * t;
    g.add_edge(a, a + 1);
    g.add_edge(a + 1, a + 2);
    g.add_edge(a + 2, a);
  }
  draw_valid(g);
}

TEST_CASE("mixed blocks and bridges around one cut vertex") {
  // A K4, a triangle, and two bridges all meeting at vertex 0.
  Graph g(9);
  for (auto [u, v] : {std::pair{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}) g.add_edge(u, v);
  g.add_edge(0, 4);
  g.add_edge(4, 5);
  g.add_edge(5, 0);
  g.add_edge(0, 6);
  g.add_edge(0, 7);
  g.add_edge(7, 8);
  draw_valid(g);
}

TEST_CASE("delta override widens the slope set") {
  Graph g = octahedron();
  Drawing d = draw(g, 6);
  expect_valid(g, d);
  CHECK(d.slope_set.count() == 5);
  auto rep = verify(d);
  CHECK(rep.min_angle >= kPi / 5 - 1e-6);
  CHECK_THROWS_AS(draw(g, 3), DegreeOverrideTooSmall);
}

TEST_CASE("disconnected graphs stack in separate bands") {
  // K4 on 0..3, C5 on 4..8.
  Graph g(9);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) g.add_edge(i, j);
  for (int i = 0; i < 5; ++i) g.add_edge(4 + i, 4 + (i + 1) % 5);
  Drawing d = draw_valid(g);
  CHECK(d.components == 2);
  double hi0 = -1e300, lo1 = 1e300;
  for (int v = 0; v < 4; ++v) hi0 = std::max(hi0, d.coords[static_cast<std::size_t>(v)].y);
  for (int v = 4; v < 9; ++v) lo1 = std::min(lo1, d.coords[static_cast<std::size_t>(v)].y);
  CHECK(lo1 - hi0 >= 5.0);
}

TEST_CASE("isolated vertices and empty graphs") {
  Graph g(3);  // no edges at all
  Drawing d = draw(g);
  CHECK(d.components == 3);
  CHECK(d.edges.empty());
  CHECK(verify(d).pass);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      bool same = d.coords[static_cast<std::size_t>(i)].x == d.coords[static_cast<std::size_t>(j)].x &&
                  d.coords[static_cast<std::size_t>(i)].y == d.coords[static_cast<std::size_t>(j)].y;
      CHECK(!same);
    }
  Drawing e = draw(Graph(0));
  CHECK(e.coords.empty());
}

TEST_CASE("error reporting") {
  CHECK_THROWS_AS(draw(complete(5)), NotPlanar);
  CHECK_THROWS_AS(draw(complete_bipartite(3, 3)), NotPlanar);
  Graph two(4);
  two.add_edge(0, 1);
  two.add_edge(2, 3);
  CHECK_THROWS_AS(draw_connected(two, make_slope_set(3)), NotConnected);
}

TEST_CASE("biconnected inputs match the block pipeline end to end") {
  for (const Graph& g : {complete(4), octahedron(), prism(4), wheel(5), cube()}) draw_valid(g);
}

TEST_CASE("random planar graphs end to end") {
  std::mt19937 rng(90125);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 6 + static_cast<int>(rng() % 35);
    Graph g = random_planar(n, 2 + static_cast<int>(rng() % 10), 7, rng);
    draw_valid(g);
  }
}

TEST_CASE("random trees end to end") {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 40);
    Graph g(n);
    for (int v = 1; v < n; ++v) g.add_edge(v, static_cast<int>(rng() % static_cast<unsigned>(v)));
    Drawing d = draw_valid(g);
    CHECK(bend_count(d) == 0);
  }
}

TEST_CASE("blocks hanging off a large cycle") {
  // A 12-cycle with a triangle at every third vertex and pendants elsewhere.
  Graph g(12 + 8 + 4);
  for (int i = 0; i < 12; ++i) g.add_edge(i, (i + 1) % 12);
  int next = 12;
  for (int i = 0; i < 12; i += 3) {
    g.add_edge(i, next);
    g.add_edge(next, next + 1);
    g.add_edge(next + 1, i);
    next += 2;
  }
  for (int i = 1; i < 12; i += 3) g.add_edge(i, next++);
  draw_valid(g);
}
