#pragma once

// Independent planarity oracle for tiny graphs (n <= 7): exhaustive search for
// a K5 or K3,3 subdivision. Deliberately brute force so it shares no code or
// ideas with the embedder it cross-checks.

#include <stdexcept>
#include <vector>

#include "slopes/graph.hpp"

namespace testoracle {

using slopes::Graph;

struct OracleBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct SubdivisionSearch {
  const Graph& g;
  std::vector<std::pair<int, int>> hedges;  // edges of H over branch slots
  std::vector<int> branch;                  // slot -> G vertex
  std::vector<bool> used;

  SubdivisionSearch(const Graph& graph, int slots) : g(graph), branch(static_cast<std::size_t>(slots), -1),
                                                     used(static_cast<std::size_t>(graph.n()), false) {}

  // Internally disjoint path from a to b through currently unused vertices.
  bool route(std::size_t ei) {
    if (ei == hedges.size()) return true;
    int a = branch[static_cast<std::size_t>(hedges[ei].first)];
    int b = branch[static_cast<std::size_t>(hedges[ei].second)];
    return dfs_path(a, b, ei);
  }

  bool dfs_path(int cur, int target, std::size_t ei) {
    for (int w : g.neighbors(cur)) {
      if (w == target) {
        if (route(ei + 1)) return true;
        continue;
      }
      if (used[static_cast<std::size_t>(w)]) continue;
      used[static_cast<std::size_t>(w)] = true;
      if (dfs_path(w, target, ei)) return true;
      used[static_cast<std::size_t>(w)] = false;
    }
    return false;
  }

  bool assign(std::size_t slot, std::vector<int>& mindeg) {
    if (slot == branch.size()) return route(0);
    for (int v = 0; v < g.n(); ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      if (g.degree(v) < mindeg[slot]) continue;
      // Symmetry pruning inside interchangeable slot groups.
      if (slot > 0 && mindeg[slot] == mindeg[slot - 1] && same_group(slot) &&
          branch[slot - 1] > v)
        continue;
      branch[slot] = v;
      used[static_cast<std::size_t>(v)] = true;
      if (assign(slot + 1, mindeg)) return true;
      used[static_cast<std::size_t>(v)] = false;
      branch[slot] = -1;
    }
    return false;
  }

  virtual bool same_group(std::size_t) const { return true; }
  virtual ~SubdivisionSearch() = default;
};

struct K5Search : SubdivisionSearch {
  explicit K5Search(const Graph& graph) : SubdivisionSearch(graph, 5) {
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) hedges.emplace_back(i, j);
  }
};

struct K33Search : SubdivisionSearch {
  explicit K33Search(const Graph& graph) : SubdivisionSearch(graph, 6) {
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j) hedges.emplace_back(i, j);
  }
  bool same_group(std::size_t slot) const override { return slot != 3; }
};

}  // namespace detail

inline bool has_k5_subdivision(const Graph& g) {
  detail::K5Search s(g);
  std::vector<int> mindeg(5, 4);
  return s.assign(0, mindeg);
}

inline bool has_k33_subdivision(const Graph& g) {
  detail::K33Search s(g);
  std::vector<int> mindeg(6, 3);
  return s.assign(0, mindeg);
}

/// Kuratowski-based planarity for n <= 8 only.
inline bool oracle_planar(const Graph& g) {
  if (g.n() > 8) throw OracleBudgetExceeded("planarity oracle limited to n <= 8");
  return !has_k5_subdivision(g) && !has_k33_subdivision(g);
}

}  // namespace testoracle
