#pragma once

// Test-only graph constructors shared across suites.

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "slopes/graph.hpp"

namespace testgraphs {

using slopes::Graph;

inline Graph complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline Graph complete_bipartite(int a, int b) {
  Graph g(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
  return g;
}

inline Graph cycle(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph star(int leaves) {  // K_{1,leaves}, center 0
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

inline Graph octahedron() {  // K_{2,2,2}
  Graph g(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (!(i / 2 == j / 2)) g.add_edge(i, j);
  return g;
}

inline Graph cube() {
  Graph g(8);
  for (int i = 0; i < 8; ++i)
    for (int b = 0; b < 3; ++b)
      if (i < (i ^ (1 << b))) g.add_edge(i, i ^ (1 << b));
  return g;
}

inline Graph grid(int rows, int cols) {
  Graph g(rows * cols);
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
    }
  return g;
}

// Top apex 0, upper ring 1..5, lower ring 6..10, bottom apex 11.
inline Graph icosahedron() {
  Graph g(12);
  auto u = [](int i) { return 1 + ((i % 5) + 5) % 5; };
  auto l = [](int i) { return 6 + ((i % 5) + 5) % 5; };
  for (int i = 0; i < 5; ++i) {
    g.add_edge(0, u(i));
    g.add_edge(11, l(i));
    g.add_edge(u(i), u(i + 1));
    g.add_edge(l(i), l(i + 1));
    g.add_edge(u(i), l(i));
    g.add_edge(u(i), l(i - 1));
  }
  return g;
}

// Outer pentagon 0..4, middle decagon 5..14, inner pentagon 15..19.
inline Graph dodecahedron() {
  Graph g(20);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(15 + i, 15 + (i + 1) % 5);
    g.add_edge(i, 5 + 2 * i);
    g.add_edge(15 + i, 5 + (2 * i + 1));
  }
  for (int i = 0; i < 10; ++i) g.add_edge(5 + i, 5 + (i + 1) % 10);
  return g;
}

inline Graph wheel(int rim) {  // hub 0, rim 1..rim
  Graph g(rim + 1);
  for (int i = 1; i <= rim; ++i) {
    g.add_edge(0, i);
    g.add_edge(i, i % rim + 1);
  }
  return g;
}

inline Graph prism(int k) {  // two k-cycles joined by a matching
  Graph g(2 * k);
  for (int i = 0; i < k; ++i) {
    g.add_edge(i, (i + 1) % k);
    g.add_edge(k + i, k + (i + 1) % k);
    g.add_edge(i, k + i);
  }
  return g;
}

inline Graph petersen() {
  Graph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, 5 + i);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

/// Uniform random simple graph on n vertices with m of the possible edges.
inline Graph random_graph(int n, int m, std::mt19937& rng) {
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  std::shuffle(all.begin(), all.end(), rng);
  Graph g(n);
  for (int k = 0; k < m && k < static_cast<int>(all.size()); ++k)
    g.add_edge(all[static_cast<std::size_t>(k)].first, all[static_cast<std::size_t>(k)].second);
  return g;
}

/// Random connected planar graph built constructively: start from a cycle and
/// repeatedly split a face with a chord between two non-adjacent boundary
/// vertices whose degrees stay below `max_degree`. Never needs a planarity
/// test, so it scales to thousands of vertices.
inline Graph random_planar(int n, int extra_chords, int max_degree, std::mt19937& rng) {
  Graph g(n);
  // Faces tracked as vertex cycles; index 0 is the outer face, left alone so
  // the graph stays visibly non-maximal.
  std::vector<std::vector<int>> faces;
  std::vector<int> rim(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rim[static_cast<std::size_t>(i)] = i;
    g.add_edge(i, (i + 1) % n);
  }
  faces.push_back(rim);
  faces.push_back(rim);
  int added = 0, attempts = 0;
  std::uniform_int_distribution<std::size_t> dist;
  while (added < extra_chords && attempts < 50 * extra_chords + 1000) {
    ++attempts;
    std::size_t fi =
        1 + std::uniform_int_distribution<std::size_t>(0, faces.size() - 2)(rng);
    auto& face = faces[fi];
    if (face.size() < 4) continue;
    std::size_t len = face.size();
    std::size_t ia = std::uniform_int_distribution<std::size_t>(0, len - 1)(rng);
    std::size_t ib = std::uniform_int_distribution<std::size_t>(0, len - 1)(rng);
    if (ia == ib) continue;
    int a = face[ia], b = face[ib];
    if (g.has_edge(a, b)) continue;
    if (g.degree(a) >= max_degree || g.degree(b) >= max_degree) continue;
    g.add_edge(a, b);
    if (ia > ib) std::swap(ia, ib);
    std::vector<int> f1(face.begin() + static_cast<long>(ia), face.begin() + static_cast<long>(ib) + 1);
    std::vector<int> f2(face.begin() + static_cast<long>(ib), face.end());
    f2.insert(f2.end(), face.begin(), face.begin() + static_cast<long>(ia) + 1);
    faces[fi] = std::move(f1);
    faces.push_back(std::move(f2));
    ++added;
  }
  return g;
}

/// Random triconnected planar graph: grow a stacked triangulation from K4 by
/// inserting vertices into random faces (planar triangulations are always
/// 3-connected), then thin it with random edge deletions that are rolled back
/// whenever they would break triconnectivity. `max_degree` caps face picks.
inline Graph random_triconnected(int n, int max_degree, std::mt19937& rng) {
  Graph g = complete(std::min(n, 4));
  if (n <= 4) return g;
  std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  Graph grown(n);
  for (auto [u, v] : g.edges()) grown.add_edge(u, v);
  g = std::move(grown);
  for (int v = 4; v < n; ++v) {
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const auto& f = faces[i];
      if (g.degree(f[0]) < max_degree && g.degree(f[1]) < max_degree && g.degree(f[2]) < max_degree)
        ok.push_back(i);
    }
    if (ok.empty()) ok.push_back(rng() % faces.size());  // cap is best-effort
    std::size_t fi = ok[rng() % ok.size()];
    auto f = faces[fi];
    for (int c : f) g.add_edge(v, c);
    faces[fi] = {f[0], f[1], v};
    faces.push_back({f[0], f[2], v});
    faces.push_back({f[1], f[2], v});
  }
  // Thinning pass: drop edges while the graph stays triconnected.
  int attempts = g.m();
  for (int t = 0; t < attempts; ++t) {
    auto edges = g.edges();
    auto [u, v] = edges[rng() % edges.size()];
    if (g.degree(u) <= 3 || g.degree(v) <= 3) continue;
    Graph h(g.n());
    for (auto [a, b] : edges)
      if (!(a == u && b == v) && !(a == v && b == u)) h.add_edge(a, b);
    if (is_triconnected(h)) g = std::move(h);
  }
  return g;
}

}  // namespace testgraphs
