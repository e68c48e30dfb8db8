#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "named_graphs.hpp"
#include "planarity_oracle.hpp"
#include "slopes/graph.hpp"

using namespace slopes;
using namespace testgraphs;

namespace {

// Every rotation list must be a permutation of the neighbor list.
bool rotations_valid(const Embedding& e) {
  for (int v = 0; v < e.graph.n(); ++v) {
    auto rot = e.rotation[static_cast<std::size_t>(v)];
    auto nb = e.graph.neighbors(v);
    std::sort(rot.begin(), rot.end());
    std::sort(nb.begin(), nb.end());
    if (rot != nb) return false;
  }
  return true;
}

int face_count(const Embedding& e) { return static_cast<int>(e.faces().size()); }

}  // namespace

TEST_CASE("graph basics") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  CHECK(g.n() == 4);
  CHECK(g.m() == 2);
  CHECK(g.has_edge(1, 0));
  CHECK(!g.has_edge(0, 2));
  CHECK(g.degree(1) == 2);
  CHECK(g.max_degree() == 2);
  CHECK_THROWS_AS(g.add_edge(2, 2), GraphError);
  CHECK_THROWS_AS(g.add_edge(0, 1), GraphError);
  CHECK_THROWS_AS(g.add_edge(0, 7), GraphError);

  auto h = g.induced({1, 2, 3});
  CHECK(h.n() == 3);
  CHECK(h.m() == 1);
  CHECK(h.has_edge(0, 1));  // old 1-2
}

TEST_CASE("connectivity") {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  CHECK(!is_connected(g));
  CHECK(connected_components(g).size() == 3);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  CHECK(is_connected(g));
}

TEST_CASE("articulation points") {
  // Two triangles sharing vertex 2.
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 2);
  CHECK(articulation_points(g) == std::vector<int>{2});

  CHECK(articulation_points(path(4)) == std::vector<int>{1, 2});
  CHECK(articulation_points(cycle(5)).empty());
  CHECK(articulation_points(star(4)) == std::vector<int>{0});
}

TEST_CASE("biconnectivity and triconnectivity") {
  CHECK(is_biconnected(cycle(4)));
  CHECK(is_biconnected(complete(4)));
  CHECK(!is_biconnected(path(3)));
  CHECK(!is_biconnected(star(3)));
  Graph e2(2);
  e2.add_edge(0, 1);
  CHECK(is_biconnected(e2));

  CHECK(is_triconnected(complete(4)));
  CHECK(is_triconnected(octahedron()));
  CHECK(is_triconnected(cube()));
  CHECK(is_triconnected(icosahedron()));
  CHECK(is_triconnected(dodecahedron()));
  CHECK(!is_triconnected(cycle(5)));     // any two non-adjacent rim vertices split it
  CHECK(!is_triconnected(grid(3, 3)));   // corners have degree 2
  CHECK(!is_triconnected(complete(3)));  // too small
}

TEST_CASE("planarity of named graphs") {
  CHECK(planar_embed(complete(4)).has_value());
  CHECK(planar_embed(octahedron()).has_value());
  CHECK(planar_embed(cube()).has_value());
  CHECK(planar_embed(icosahedron()).has_value());
  CHECK(planar_embed(dodecahedron()).has_value());
  CHECK(planar_embed(grid(3, 3)).has_value());
  CHECK(planar_embed(star(8)).has_value());

  NotPlanar why;
  CHECK(!planar_embed(complete(5), &why).has_value());
  CHECK(!why.detail.empty());
  CHECK(!planar_embed(complete_bipartite(3, 3)).has_value());
  CHECK(!planar_embed(petersen()).has_value());
  CHECK(!planar_embed(complete(6)).has_value());
}

TEST_CASE("face structure of platonic embeddings") {
  struct Row {
    Graph g;
    int faces;
    std::size_t face_len;
  };
  std::vector<Row> rows;
  rows.push_back({complete(4), 4, 3});
  rows.push_back({octahedron(), 8, 3});
  rows.push_back({cube(), 6, 4});
  rows.push_back({icosahedron(), 20, 3});
  rows.push_back({dodecahedron(), 12, 5});
  for (auto& row : rows) {
    auto e = planar_embed(row.g);
    REQUIRE(e.has_value());
    CHECK(rotations_valid(*e));
    CHECK(euler_check(*e));
    auto faces = e->faces();
    CHECK(static_cast<int>(faces.size()) == row.faces);
    int outer_seen = 0;
    for (const auto& f : faces) {
      CHECK(f.boundary.size() == row.face_len);
      if (f.is_outer) ++outer_seen;
    }
    CHECK(outer_seen == 1);
  }
}

TEST_CASE("embedding of trees and cut vertices") {
  auto e = planar_embed(star(5));
  REQUIRE(e.has_value());
  CHECK(rotations_valid(*e));
  CHECK(face_count(*e) == 1);
  CHECK(euler_check(*e));

  // Two blocks joined at a cut vertex.
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 2);
  auto e2 = planar_embed(g);
  REQUIRE(e2.has_value());
  CHECK(rotations_valid(*e2));
  CHECK(euler_check(*e2));
  CHECK(face_count(*e2) == 3);  // two triangles plus the merged outer face
}

TEST_CASE("disconnected embedding") {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(3, 4);
  auto e = planar_embed(g);
  REQUIRE(e.has_value());
  CHECK(euler_check(*e));
}

TEST_CASE("oracle sanity") {
  CHECK(testoracle::has_k5_subdivision(complete(5)));
  CHECK(!testoracle::has_k5_subdivision(complete(4)));
  CHECK(testoracle::has_k33_subdivision(complete_bipartite(3, 3)));
  CHECK(!testoracle::has_k33_subdivision(cube()));
  CHECK(testoracle::oracle_planar(complete(4)));
  CHECK(!testoracle::oracle_planar(complete(5)));
  CHECK(!testoracle::oracle_planar(complete_bipartite(3, 3)));
  // K5 with one edge subdivided still has the subdivision.
  Graph g = complete(5);
  Graph h(6);
  for (auto [u, v] : g.edges())
    if (!(u == 0 && v == 1)) h.add_edge(u, v);
  h.add_edge(0, 5);
  h.add_edge(5, 1);
  CHECK(testoracle::has_k5_subdivision(h));
  CHECK(!testoracle::oracle_planar(h));
  CHECK_THROWS_AS(testoracle::oracle_planar(complete(9)), testoracle::OracleBudgetExceeded);
}

TEST_CASE("embedder agrees with the subdivision oracle on random graphs") {
  std::mt19937 rng(20240817);
  int planar_seen = 0, nonplanar_seen = 0;
  for (int trial = 0; trial < 600; ++trial) {
    int n = 3 + static_cast<int>(rng() % 5);  // 3..7
    int maxm = n * (n - 1) / 2;
    int m = static_cast<int>(rng() % static_cast<unsigned>(maxm + 1));
    Graph g = random_graph(n, m, rng);
    bool expect = testoracle::oracle_planar(g);
    auto e = planar_embed(g);
    REQUIRE(e.has_value() == expect);
    if (expect) {
      ++planar_seen;
      CHECK(rotations_valid(*e));
      CHECK(euler_check(*e));
    } else {
      ++nonplanar_seen;
    }
  }
  CHECK(planar_seen > 100);
  CHECK(nonplanar_seen > 50);
}

TEST_CASE("constructive planar generator emits planar graphs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = random_planar(12 + trial, 8, 10, rng);
    CHECK(is_connected(g));
    auto e = planar_embed(g);
    REQUIRE(e.has_value());
    CHECK(euler_check(*e));
    CHECK(g.max_degree() <= 10);
  }
}
