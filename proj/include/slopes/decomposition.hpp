#pragma once

#include <utility>
#include <vector>

#include "slopes/graph.hpp"

namespace slopes {

struct NotTriconnected : GraphError {
  using GraphError::GraphError;
};
struct NotBiconnected : GraphError {
  using GraphError::GraphError;
};
struct NotConnected : GraphError {
  using GraphError::GraphError;
};

/// Canonical order of a triconnected plane graph: a partition of the vertices
/// into paths P0..Pm with P0 = {v1, v2}, Pm = {vn}, every prefix graph G_k
/// biconnected, attachments of each path on the outer cycle of the previous
/// prefix, and every vertex of a non-final path keeping a neighbor in a later
/// path. Chains are listed in contour order.
struct CanonicalOrder {
  std::vector<std::vector<int>> parts;
  int v1 = -1, v2 = -1, vn = -1;
};

/// Compute a canonical order with designated base edge (v1, v2); the base edge
/// must lie on the outer face of `e`. Reverse-removal construction; when
/// several paths qualify the one with the smallest minimum vertex id wins.
CanonicalOrder canonical_order(const Embedding& e, int v1, int v2);

// ---------------------------------------------------------------------------
// SPQR decomposition of a biconnected graph into triconnected components.
// ---------------------------------------------------------------------------

enum class SpqrType { S, P, Q, R };

/// A skeleton edge. `child == -1` marks the real edge inside a Q-node; every
/// skeleton edge of an S/P/R node points at the child whose pertinent graph it
/// stands for (single real edges become leaf Q-nodes).
struct SkelEdge {
  int u = -1, v = -1;  // graph vertex ids
  int child = -1;
};

struct SpqrNode {
  SpqrType type;
  int s = -1, t = -1;  // poles; for the root Q-node, the reference edge ends
  /// Skeleton edges, excluding the implicit reference edge (s, t) to the
  /// parent. S-node edges are listed in chain order from s to t, so the
  /// skeleton cycle is s, edges[0].v, edges[1].v, ..., t, back over the
  /// reference edge. Leaf Q-nodes have no entries.
  std::vector<SkelEdge> edges;
  int parent = -1;
};

struct SpqrTree {
  std::vector<SpqrNode> nodes;
  int root = 0;  // always a Q-node

  /// Real edges of the pertinent graph of `node` (whole graph minus the root's
  /// reference edge when called on root's child).
  std::vector<std::pair<int, int>> pertinent_edges(int node) const;
  /// Number of pertinent real edges incident to graph vertex `v`.
  int pertinent_degree(int node, int v) const;
};

/// Decompose into triconnected components, rooted at the Q-node of root_edge.
SpqrTree build_spqr(const Graph& g, std::pair<int, int> root_edge);

// ---------------------------------------------------------------------------
// BC-tree: blocks and cut vertices of a connected graph.
// ---------------------------------------------------------------------------

struct BcTree {
  std::vector<std::vector<std::pair<int, int>>> blocks;  // edge partition
  std::vector<int> cut_vertices;
  /// block_cuts[b] = cut vertices lying in block b, ascending.
  std::vector<std::vector<int>> block_cuts;

  bool is_cut_vertex(int v) const;
};

BcTree build_bc_tree(const Graph& g);

}  // namespace slopes
