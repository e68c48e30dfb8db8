#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slopes {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph on dense vertex ids 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {
    if (n < 0) throw GraphError("negative vertex count");
  }

  int n() const { return static_cast<int>(adj_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;

  const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  int max_degree() const;

  /// Induced subgraph on `verts`; out_map[i] = original id of new vertex i.
  Graph induced(const std::vector<int>& verts, std::vector<int>* out_map = nullptr) const;

 private:
  void check(int v) const {
    if (v < 0 || v >= n()) throw GraphError("vertex out of range");
  }
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

bool is_connected(const Graph& g);
std::vector<std::vector<int>> connected_components(const Graph& g);

/// Cut vertices of a connected or disconnected graph.
std::vector<int> articulation_points(const Graph& g);
/// Edge partition into biconnected components (bridges are their own blocks).
std::vector<std::vector<std::pair<int, int>>> biconnected_edge_components(const Graph& g);
bool is_biconnected(const Graph& g);
/// No split pair: connected after removal of any two vertices (and n >= 4).
bool is_triconnected(const Graph& g);

using DirectedEdge = std::pair<int, int>;  // (tail, head)

struct Face {
  std::vector<DirectedEdge> boundary;  // closed cyclic walk
  bool is_outer = false;
};

/// A combinatorial planar embedding: per-vertex cyclic neighbor order plus a
/// designated outer face. Face traversal follows the convention
/// next(u -> v) = (v -> w) with w the successor of u in rotation[v]; with
/// counter-clockwise rotations this walks each face with its interior on the
/// left and the outer face is traced clockwise.
struct Embedding {
  Graph graph;
  std::vector<std::vector<int>> rotation;  // rotation[v] = cyclic neighbor order
  int outer_face = 0;                      // index into faces()

  std::vector<Face> faces() const;
};

struct NotPlanar {
  std::string detail;
};

/// Planarity test with embedding extraction. Accepts any simple graph.
std::optional<Embedding> planar_embed(const Graph& g, NotPlanar* why = nullptr);

bool euler_check(const Embedding& e);

}  // namespace slopes
