#include "slopes/graph.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>

namespace slopes {

void Graph::add_edge(int u, int v) {
  check(u);
  check(v);
  if (u == v) throw GraphError("self loop");
  if (has_edge(u, v)) throw GraphError("duplicate edge");
  adj_[static_cast<std::size_t>(u)].push_back(v);
  adj_[static_cast<std::size_t>(v)].push_back(u);
  edges_.emplace_back(std::min(u, v), std::max(u, v));
}

bool Graph::has_edge(int u, int v) const {
  check(u);
  check(v);
  const auto& a = adj_[static_cast<std::size_t>(u)];
  return std::find(a.begin(), a.end(), v) != a.end();
}

int Graph::max_degree() const {
  int d = 0;
  for (int v = 0; v < n(); ++v) d = std::max(d, degree(v));
  return d;
}

Graph Graph::induced(const std::vector<int>& verts, std::vector<int>* out_map) const {
  Graph h(static_cast<int>(verts.size()));
  std::vector<int> inv(static_cast<std::size_t>(n()), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) inv[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
  for (const auto& [u, v] : edges_) {
    int iu = inv[static_cast<std::size_t>(u)], iv = inv[static_cast<std::size_t>(v)];
    if (iu >= 0 && iv >= 0) h.add_edge(iu, iv);
  }
  if (out_map) *out_map = verts;
  return h;
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(static_cast<std::size_t>(g.n()), false);
  for (int s = 0; s < g.n(); ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp, stack{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : g.neighbors(v))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool is_connected(const Graph& g) { return g.n() <= 1 || connected_components(g).size() == 1; }

std::vector<int> articulation_points(const Graph& g) {
  int n = g.n();
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<bool> is_cut(static_cast<std::size_t>(n), false);
  int timer = 0;
  // Iterative DFS to stay safe on large inputs.
  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] != -1) continue;
    struct Frame {
      int v, parent;
      std::size_t idx;
      int children;
    };
    std::vector<Frame> st{{root, -1, 0, 0}};
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      const auto& nb = g.neighbors(f.v);
      if (f.idx < nb.size()) {
        int w = nb[f.idx++];
        if (w == f.parent) continue;
        if (disc[static_cast<std::size_t>(w)] == -1) {
          disc[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = timer++;
          f.children++;
          st.push_back({w, f.v, 0, 0});
        } else {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], disc[static_cast<std::size_t>(w)]);
        }
      } else {
        int v = f.v, parent = f.parent, children = f.children;
        st.pop_back();
        if (parent != -1) {
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v)]);
          if (low[static_cast<std::size_t>(v)] >= disc[static_cast<std::size_t>(parent)] &&
              !(st.size() == 1 && st.back().v == root))
            is_cut[static_cast<std::size_t>(parent)] = true;
        } else if (children > 1) {
          is_cut[static_cast<std::size_t>(v)] = true;
        }
      }
    }
  }
  std::vector<int> cuts;
  for (int v = 0; v < n; ++v)
    if (is_cut[static_cast<std::size_t>(v)]) cuts.push_back(v);
  return cuts;
}

bool is_biconnected(const Graph& g) {
  if (g.n() < 3) return g.n() == 2 && g.m() == 1;
  return is_connected(g) && articulation_points(g).empty();
}

bool is_triconnected(const Graph& g) {
  if (g.n() < 4 || !is_biconnected(g)) return false;
  for (int v = 0; v < g.n(); ++v) {
    std::vector<int> rest;
    for (int w = 0; w < g.n(); ++w)
      if (w != v) rest.push_back(w);
    if (!is_biconnected(g.induced(rest))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Planar embedding via iterative face insertion (Demoucron-Malgrange-Pertuiset)
// per biconnected block, merged at cut vertices.
// ---------------------------------------------------------------------------

// Edge-partition into biconnected components (Tarjan edge stack).
std::vector<std::vector<std::pair<int, int>>> biconnected_edge_components(const Graph& g) {
  int n = g.n();
  std::vector<std::vector<std::pair<int, int>>> blocks;
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> estack;
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int v, int parent) {
    disc[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = timer++;
    bool skipped_parent = false;
    for (int w : g.neighbors(v)) {
      if (w == parent && !skipped_parent) {
        skipped_parent = true;
        continue;
      }
      if (disc[static_cast<std::size_t>(w)] == -1) {
        estack.emplace_back(v, w);
        dfs(w, v);
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(w)]);
        if (low[static_cast<std::size_t>(w)] >= disc[static_cast<std::size_t>(v)]) {
          std::vector<std::pair<int, int>> block;
          while (true) {
            auto e = estack.back();
            estack.pop_back();
            block.push_back(e);
            if (e == std::make_pair(v, w)) break;
          }
          blocks.push_back(std::move(block));
        }
      } else if (disc[static_cast<std::size_t>(w)] < disc[static_cast<std::size_t>(v)]) {
        estack.emplace_back(v, w);
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], disc[static_cast<std::size_t>(w)]);
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (disc[static_cast<std::size_t>(v)] == -1) dfs(v, -1);
  return blocks;
}

namespace {

// DMP state for one biconnected block. Faces are simple vertex cycles, all
// oriented consistently (the two initial faces are mutual reverses).
struct DmpEmbedder {
  const Graph& g;
  std::vector<std::vector<int>> faces;
  std::vector<bool> on_h;                       // vertex embedded
  std::set<std::pair<int, int>> embedded;       // normalized edges
  int embedded_edges = 0;

  explicit DmpEmbedder(const Graph& graph)
      : g(graph), on_h(static_cast<std::size_t>(graph.n()), false) {}

  static std::pair<int, int> norm(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

  bool edge_embedded(int u, int v) const { return embedded.count(norm(u, v)) > 0; }

  std::vector<int> find_cycle() const {
    int n = g.n();
    std::vector<int> parent(static_cast<std::size_t>(n), -2);
    std::vector<int> stack{0};
    parent[0] = -1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(v)) {
        if (parent[static_cast<std::size_t>(w)] == -2) {
          parent[static_cast<std::size_t>(w)] = v;
          stack.push_back(w);
        } else if (w != parent[static_cast<std::size_t>(v)]) {
          // Cycle through tree paths to their meeting point.
          std::vector<int> pv, pw;
          for (int x = v; x != -1; x = parent[static_cast<std::size_t>(x)]) pv.push_back(x);
          for (int x = w; x != -1; x = parent[static_cast<std::size_t>(x)]) pw.push_back(x);
          std::set<int> inv(pv.begin(), pv.end());
          int meet = -1;
          for (int x : pw)
            if (inv.count(x)) {
              meet = x;
              break;
            }
          std::vector<int> cyc;
          for (int x = v; x != meet; x = parent[static_cast<std::size_t>(x)]) cyc.push_back(x);
          cyc.push_back(meet);
          std::vector<int> tail;
          for (int x = w; x != meet; x = parent[static_cast<std::size_t>(x)]) tail.push_back(x);
          std::reverse(tail.begin(), tail.end());
          for (int x : tail) cyc.push_back(x);
          return cyc;
        }
      }
    }
    throw GraphError("acyclic block passed to DMP");
  }

  void embed_path(const std::vector<int>& path) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      embedded.insert(norm(path[i], path[i + 1]));
      ++embedded_edges;
    }
    for (int v : path) on_h[static_cast<std::size_t>(v)] = true;
  }

  struct Fragment {
    std::vector<int> attachments;       // embedded vertices, deduped
    std::vector<int> inner;             // non-embedded vertices (empty for a chord)
    std::pair<int, int> chord{-1, -1};  // valid when inner is empty
  };

  std::vector<Fragment> fragments() const {
    std::vector<Fragment> out;
    std::vector<bool> seen(static_cast<std::size_t>(g.n()), false);
    for (int s = 0; s < g.n(); ++s) {
      if (on_h[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
      Fragment f;
      std::set<int> att;
      std::vector<int> stack{s};
      seen[static_cast<std::size_t>(s)] = true;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        f.inner.push_back(v);
        for (int w : g.neighbors(v)) {
          if (on_h[static_cast<std::size_t>(w)]) {
            att.insert(w);
          } else if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = true;
            stack.push_back(w);
          }
        }
      }
      f.attachments.assign(att.begin(), att.end());
      out.push_back(std::move(f));
    }
    for (const auto& [u, v] : g.edges()) {
      if (on_h[static_cast<std::size_t>(u)] && on_h[static_cast<std::size_t>(v)] && !edge_embedded(u, v)) {
        Fragment f;
        f.attachments = {std::min(u, v), std::max(u, v)};
        f.chord = {u, v};
        out.push_back(std::move(f));
      }
    }
    return out;
  }

  std::vector<int> admissible_faces(const Fragment& f) const {
    std::vector<int> adm;
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      const auto& face = faces[fi];
      bool ok = true;
      for (int a : f.attachments) {
        if (std::find(face.begin(), face.end(), a) == face.end()) {
          ok = false;
          break;
        }
      }
      if (ok) adm.push_back(static_cast<int>(fi));
    }
    return adm;
  }

  // Path through the fragment between two attachments.
  std::vector<int> fragment_path(const Fragment& f) const {
    if (f.inner.empty()) return {f.chord.first, f.chord.second};
    int a = f.attachments.front();
    std::vector<int> parent(static_cast<std::size_t>(g.n()), -2);
    std::set<int> innerset(f.inner.begin(), f.inner.end());
    std::vector<int> queue;
    std::size_t qh = 0;
    for (int w : g.neighbors(a)) {
      if (innerset.count(w) && parent[static_cast<std::size_t>(w)] == -2) {
        parent[static_cast<std::size_t>(w)] = a;
        queue.push_back(w);
      }
    }
    while (qh < queue.size()) {
      int v = queue[qh++];
      for (int w : g.neighbors(v)) {
        if (on_h[static_cast<std::size_t>(w)] && w != a) {
          std::vector<int> path{w};
          for (int x = v; x != a; x = parent[static_cast<std::size_t>(x)]) path.push_back(x);
          path.push_back(a);
          std::reverse(path.begin(), path.end());
          return path;  // a ... w
        }
        if (innerset.count(w) && parent[static_cast<std::size_t>(w)] == -2) {
          parent[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        }
      }
    }
    throw GraphError("fragment with a single attachment in a biconnected block");
  }

  void split_face(int fi, const std::vector<int>& path) {
    std::vector<int> face = faces[static_cast<std::size_t>(fi)];
    int a = path.front(), b = path.back();
    auto ita = std::find(face.begin(), face.end(), a);
    auto itb = std::find(face.begin(), face.end(), b);
    assert(ita != face.end() && itb != face.end());
    std::size_t ia = static_cast<std::size_t>(ita - face.begin());
    std::size_t ib = static_cast<std::size_t>(itb - face.begin());
    std::size_t len = face.size();
    // arc1: a -> b forward along the face; arc2: b -> a forward.
    std::vector<int> arc1, arc2;
    for (std::size_t i = ia;; i = (i + 1) % len) {
      arc1.push_back(face[i]);
      if (i == ib) break;
    }
    for (std::size_t i = ib;; i = (i + 1) % len) {
      arc2.push_back(face[i]);
      if (i == ia) break;
    }
    // Face 1 keeps arc1 and returns b -> a along the reversed path interior.
    std::vector<int> f1 = arc1;
    for (std::size_t i = path.size() - 2; i >= 1; --i) f1.push_back(path[i]);
    // Face 2 walks the path a -> b and then arc2 back to a (exclusive).
    std::vector<int> f2(path.begin(), path.end() - 1);
    for (std::size_t i = 0; i + 1 < arc2.size(); ++i) f2.push_back(arc2[i]);
    faces[static_cast<std::size_t>(fi)] = std::move(f1);
    faces.push_back(std::move(f2));
  }

  bool run() {
    std::vector<int> cyc = find_cycle();
    embed_path(cyc);
    embedded.insert(norm(cyc.back(), cyc.front()));
    ++embedded_edges;
    faces.push_back(cyc);
    std::vector<int> rcyc(cyc.rbegin(), cyc.rend());
    faces.push_back(rcyc);

    while (embedded_edges < g.m()) {
      auto frags = fragments();
      assert(!frags.empty());
      int best = -1, best_face = -1;
      std::size_t best_count = static_cast<std::size_t>(-1);
      for (std::size_t i = 0; i < frags.size(); ++i) {
        auto adm = admissible_faces(frags[i]);
        if (adm.empty()) return false;  // not planar
        if (adm.size() < best_count) {
          best_count = adm.size();
          best = static_cast<int>(i);
          best_face = adm.front();
        }
        if (best_count == 1) break;
      }
      auto path = fragment_path(frags[static_cast<std::size_t>(best)]);
      embed_path(path);
      split_face(best_face, path);
    }
    return true;
  }

  // Rotation built from the face system: in face walk ... u, v, w ... the
  // successor of u in rotation[v] is w.
  std::vector<std::vector<int>> rotations() const {
    int n = g.n();
    std::vector<std::map<int, int>> succ(static_cast<std::size_t>(n));
    for (const auto& face : faces) {
      std::size_t len = face.size();
      for (std::size_t i = 0; i < len; ++i) {
        int u = face[i], v = face[(i + 1) % len], w = face[(i + 2) % len];
        succ[static_cast<std::size_t>(v)][u] = w;
      }
    }
    std::vector<std::vector<int>> rot(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      auto& mp = succ[static_cast<std::size_t>(v)];
      if (mp.empty()) continue;
      int start = mp.begin()->first;
      int cur = start;
      do {
        rot[static_cast<std::size_t>(v)].push_back(cur);
        cur = mp.at(cur);
      } while (cur != start);
      if (rot[static_cast<std::size_t>(v)].size() != static_cast<std::size_t>(g.degree(v)))
        throw GraphError("inconsistent rotation from face system");
    }
    return rot;
  }
};

}  // namespace

std::vector<Face> Embedding::faces() const {
  const Graph& g = graph;
  // Position lookup for rotation successor queries.
  std::vector<std::map<int, int>> pos(static_cast<std::size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v)
    for (std::size_t i = 0; i < rotation[static_cast<std::size_t>(v)].size(); ++i)
      pos[static_cast<std::size_t>(v)][rotation[static_cast<std::size_t>(v)][i]] = static_cast<int>(i);

  std::set<DirectedEdge> visited;
  std::vector<Face> out;
  for (const auto& [a, b] : g.edges()) {
    for (auto start : {DirectedEdge{a, b}, DirectedEdge{b, a}}) {
      if (visited.count(start)) continue;
      Face f;
      DirectedEdge cur = start;
      do {
        visited.insert(cur);
        f.boundary.push_back(cur);
        auto [u, v] = cur;
        const auto& rotv = rotation[static_cast<std::size_t>(v)];
        int idx = pos[static_cast<std::size_t>(v)].at(u);
        int w = rotv[(static_cast<std::size_t>(idx) + 1) % rotv.size()];
        cur = {v, w};
      } while (cur != start);
      out.push_back(std::move(f));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].is_outer = (static_cast<int>(i) == outer_face);
  return out;
}

bool euler_check(const Embedding& e) {
  auto faces = e.faces();
  std::size_t boundary_total = 0;
  for (const auto& f : faces) boundary_total += f.boundary.size();
  if (boundary_total != 2 * static_cast<std::size_t>(e.graph.m())) return false;
  // Per connected component: n - m + f == 2 (components with edges).
  auto comps = connected_components(e.graph);
  for (const auto& comp : comps) {
    std::set<int> cs(comp.begin(), comp.end());
    int mc = 0;
    for (const auto& [u, v] : e.graph.edges())
      if (cs.count(u)) ++mc;
    if (mc == 0) continue;
    int fc = 0;
    for (const auto& f : faces)
      if (cs.count(f.boundary.front().first)) ++fc;
    if (static_cast<int>(comp.size()) - mc + fc != 2) return false;
  }
  return true;
}

std::optional<Embedding> planar_embed(const Graph& g, NotPlanar* why) {
  if (g.n() >= 3 && g.m() > 3 * g.n() - 6) {
    if (why) why->detail = "edge count exceeds 3n-6";
    return std::nullopt;
  }
  std::vector<std::vector<int>> rot(static_cast<std::size_t>(g.n()));
  for (const auto& block : biconnected_edge_components(g)) {
    if (block.size() == 1) {
      auto [u, v] = block.front();
      rot[static_cast<std::size_t>(u)].push_back(v);
      rot[static_cast<std::size_t>(v)].push_back(u);
      continue;
    }
    std::set<int> vs;
    for (const auto& [u, v] : block) {
      vs.insert(u);
      vs.insert(v);
    }
    std::vector<int> verts(vs.begin(), vs.end());
    std::vector<int> inv(static_cast<std::size_t>(g.n()), -1);
    for (std::size_t i = 0; i < verts.size(); ++i) inv[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
    Graph bg(static_cast<int>(verts.size()));
    for (const auto& [u, v] : block)
      bg.add_edge(inv[static_cast<std::size_t>(u)], inv[static_cast<std::size_t>(v)]);
    DmpEmbedder emb(bg);
    if (!emb.run()) {
      if (why) why->detail = "non-planar biconnected component";
      return std::nullopt;
    }
    auto brot = emb.rotations();
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (int w : brot[i]) rot[static_cast<std::size_t>(verts[i])].push_back(verts[static_cast<std::size_t>(w)]);
  }
  Embedding e{g, std::move(rot), 0};
  // Deterministic outer face: longest boundary, ties by smallest directed edge.
  auto faces = e.faces();
  int best = 0;
  for (std::size_t i = 1; i < faces.size(); ++i) {
    if (faces[i].boundary.size() > faces[static_cast<std::size_t>(best)].boundary.size())
      best = static_cast<int>(i);
    else if (faces[i].boundary.size() == faces[static_cast<std::size_t>(best)].boundary.size()) {
      auto mn = [](const Face& f) { return *std::min_element(f.boundary.begin(), f.boundary.end()); };
      if (mn(faces[i]) < mn(faces[static_cast<std::size_t>(best)])) best = static_cast<int>(i);
    }
  }
  e.outer_face = best;
  return e;
}

}  // namespace slopes
