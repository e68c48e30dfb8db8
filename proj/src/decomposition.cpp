#include "slopes/decomposition.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace slopes {

// ---------------------------------------------------------------------------
// Canonical order by reverse removal.
// ---------------------------------------------------------------------------

namespace {

struct Peeler {
  const Embedding& e;
  const Graph& g;
  std::vector<bool> alive;
  std::vector<bool> peeled;
  std::vector<std::map<int, int>> pos;  // pos[v][u] = index of u in rotation[v]
  DirectedEdge d0;                      // outer-face direction of the base edge

  Peeler(const Embedding& emb, int v1, int v2)
      : e(emb), g(emb.graph), alive(static_cast<std::size_t>(g.n()), true),
        peeled(static_cast<std::size_t>(g.n()), false), pos(static_cast<std::size_t>(g.n())) {
    for (int v = 0; v < g.n(); ++v)
      for (std::size_t i = 0; i < e.rotation[static_cast<std::size_t>(v)].size(); ++i)
        pos[static_cast<std::size_t>(v)][e.rotation[static_cast<std::size_t>(v)][i]] =
            static_cast<int>(i);
    d0 = {-1, -1};
    auto faces = e.faces();
    for (const auto& de : faces[static_cast<std::size_t>(e.outer_face)].boundary)
      if ((de.first == v1 && de.second == v2) || (de.first == v2 && de.second == v1)) d0 = de;
    if (d0.first == -1) throw GraphError("base edge not on the outer face");
  }

  int next_alive(int u, int v) const {
    const auto& rot = e.rotation[static_cast<std::size_t>(v)];
    std::size_t i = static_cast<std::size_t>(pos[static_cast<std::size_t>(v)].at(u));
    for (std::size_t step = 0; step < rot.size(); ++step) {
      i = (i + 1) % rot.size();
      if (alive[static_cast<std::size_t>(rot[i])]) return rot[i];
    }
    throw GraphError("isolated contour vertex");
  }

  /// Outer cycle of the alive subgraph, starting with the base edge.
  std::vector<int> contour() const {
    std::vector<int> out;
    DirectedEdge cur = d0;
    do {
      out.push_back(cur.first);
      cur = {cur.second, next_alive(cur.first, cur.second)};
    } while (cur != d0 && out.size() <= static_cast<std::size_t>(2 * g.n()));
    if (cur != d0) throw GraphError("contour walk did not close");
    return out;
  }

  int alive_degree(int v) const {
    int d = 0;
    for (int w : g.neighbors(v))
      if (alive[static_cast<std::size_t>(w)]) ++d;
    return d;
  }

  Graph alive_graph(const std::vector<int>& minus, std::vector<int>* map_out) const {
    std::set<int> excl(minus.begin(), minus.end());
    std::vector<int> verts;
    for (int v = 0; v < g.n(); ++v)
      if (alive[static_cast<std::size_t>(v)] && !excl.count(v)) verts.push_back(v);
    return g.induced(verts, map_out);
  }

  bool candidate_valid(const std::vector<int>& part, bool need_later_neighbor) {
    for (int z : part) {
      if (need_later_neighbor) {
        bool ok = false;
        for (int w : g.neighbors(z)) ok = ok || peeled[static_cast<std::size_t>(w)];
        if (!ok) return false;
      }
    }
    std::vector<int> map;
    Graph rest = alive_graph(part, &map);
    if (!is_biconnected(rest)) return false;
    // Attachments must land on the contour of the peeled-down graph.
    for (int z : part) alive[static_cast<std::size_t>(z)] = false;
    std::vector<int> ctr;
    try {
      ctr = contour();
    } catch (const GraphError&) {
      for (int z : part) alive[static_cast<std::size_t>(z)] = true;
      return false;
    }
    for (int z : part) alive[static_cast<std::size_t>(z)] = true;
    std::set<int> on_ctr(ctr.begin(), ctr.end());
    std::set<int> in_part(part.begin(), part.end());
    for (int z : part)
      for (int w : g.neighbors(z))
        if (alive[static_cast<std::size_t>(w)] && !in_part.count(w) && !on_ctr.count(w))
          return false;
    return true;
  }

  void remove(const std::vector<int>& part) {
    for (int z : part) {
      alive[static_cast<std::size_t>(z)] = false;
      peeled[static_cast<std::size_t>(z)] = true;
    }
  }
};

}  // namespace

CanonicalOrder canonical_order(const Embedding& e, int v1, int v2) {
  const Graph& g = e.graph;
  if (!g.has_edge(v1, v2)) throw GraphError("base edge absent");
  if (!is_triconnected(g)) throw NotTriconnected("canonical order needs a triconnected graph");

  Peeler peel(e, v1, v2);

  // vn: the other outer-cycle neighbor of v1.
  std::vector<int> outer = peel.contour();
  int vn = -1;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (outer[i] != v1) continue;
    int a = outer[(i + 1) % outer.size()];
    int b = outer[(i + outer.size() - 1) % outer.size()];
    vn = (a == v2) ? b : a;
  }
  assert(vn != -1);

  std::vector<std::vector<int>> reversed;  // P_m first
  if (!peel.candidate_valid({vn}, false)) throw GraphError("cannot start canonical order");
  peel.remove({vn});
  reversed.push_back({vn});

  int alive_count = g.n() - 1;
  while (alive_count > 2) {
    std::vector<int> ctr = peel.contour();
    std::vector<std::vector<int>> cands;
    for (int z : ctr)
      if (z != v1 && z != v2) cands.push_back({z});
    // Maximal contour runs of degree-2 vertices form chain candidates.
    std::vector<int> run;
    auto flush = [&]() {
      if (run.size() >= 2) cands.push_back(run);
      run.clear();
    };
    for (std::size_t i = 2; i < ctr.size(); ++i) {  // ctr[0], ctr[1] are the base pair
      int z = ctr[i];
      if (z != v1 && z != v2 && peel.alive_degree(z) == 2)
        run.push_back(z);
      else
        flush();
    }
    flush();

    std::vector<int> best;
    for (auto& cand : cands) {
      if (!peel.candidate_valid(cand, true)) continue;
      int lo = *std::min_element(cand.begin(), cand.end());
      if (best.empty() || lo < *std::min_element(best.begin(), best.end())) best = cand;
    }
    if (best.empty()) throw GraphError("canonical order construction stuck");
    peel.remove(best);
    reversed.push_back(best);
    alive_count -= static_cast<int>(best.size());
  }

  CanonicalOrder order;
  order.v1 = v1;
  order.v2 = v2;
  order.vn = vn;
  order.parts.push_back({v1, v2});
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) order.parts.push_back(*it);
  return order;
}

// ---------------------------------------------------------------------------
// SPQR decomposition.
// ---------------------------------------------------------------------------

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

std::map<int, std::vector<int>> adjacency(const EdgeList& es) {
  std::map<int, std::vector<int>> adj;
  for (const auto& [u, v] : es) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

/// Connected components of the vertex set of `adj` with `skip` removed.
std::vector<std::vector<int>> components_minus(const std::map<int, std::vector<int>>& adj,
                                               const std::set<int>& skip) {
  std::vector<std::vector<int>> comps;
  std::set<int> seen;
  for (const auto& [start, _] : adj) {
    if (skip.count(start) || seen.count(start)) continue;
    std::vector<int> comp, stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : adj.at(v))
        if (!skip.count(w) && !seen.count(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

/// Remap an edge list to a dense Graph; fills vert list ascending.
Graph to_graph(const EdgeList& es, std::vector<int>& verts) {
  std::set<int> vs;
  for (const auto& [u, v] : es) {
    vs.insert(u);
    vs.insert(v);
  }
  verts.assign(vs.begin(), vs.end());
  std::map<int, int> inv;
  for (std::size_t i = 0; i < verts.size(); ++i) inv[verts[i]] = static_cast<int>(i);
  Graph g(static_cast<int>(verts.size()));
  for (const auto& [u, v] : es) g.add_edge(inv.at(u), inv.at(v));
  return g;
}

struct SpqrBuilder {
  std::vector<SpqrNode> nodes;

  int add(SpqrNode nd) {
    nodes.push_back(std::move(nd));
    return static_cast<int>(nodes.size()) - 1;
  }

  int decompose(const EdgeList& H, int s, int t) {
    assert(!H.empty());
    if (H.size() == 1) return add({SpqrType::Q, s, t, {}, -1});

    auto adj = adjacency(H);
    bool direct = false;
    for (const auto& [u, v] : H)
      if ((u == s && v == t) || (u == t && v == s)) direct = true;

    // Parallel case: the poles split H into several members.
    auto comps = components_minus(adj, {s, t});
    if (static_cast<int>(comps.size()) + (direct ? 1 : 0) >= 2) {
      SpqrNode node{SpqrType::P, s, t, {}, -1};
      int id = -1;
      std::vector<std::pair<EdgeList, bool>> members;  // (edges, is_direct)
      if (direct) members.push_back({{{std::min(s, t), std::max(s, t)}}, true});
      for (const auto& comp : comps) {
        std::set<int> cs(comp.begin(), comp.end());
        EdgeList part;
        for (const auto& ed : H)
          if (cs.count(ed.first) || cs.count(ed.second)) part.push_back(ed);
        members.push_back({std::move(part), false});
      }
      for (auto& [part, _] : members) node.edges.push_back({s, t, decompose(part, s, t)});
      id = add(std::move(node));
      return id;
    }

    // Series case: cut vertices of H line up between the poles.
    std::vector<int> verts;
    Graph hg = to_graph(H, verts);
    std::map<int, int> inv;
    for (std::size_t i = 0; i < verts.size(); ++i) inv[verts[i]] = static_cast<int>(i);
    std::vector<int> cuts_local = articulation_points(hg);
    if (!cuts_local.empty()) {
      std::set<int> interfaces{t};
      for (int c : cuts_local) interfaces.insert(verts[static_cast<std::size_t>(c)]);
      std::vector<EdgeList> blocks;
      for (const auto& blk : biconnected_edge_components(hg)) {
        EdgeList bl;
        for (const auto& [u, v] : blk)
          bl.emplace_back(verts[static_cast<std::size_t>(u)], verts[static_cast<std::size_t>(v)]);
        blocks.push_back(std::move(bl));
      }
      SpqrNode node{SpqrType::S, s, t, {}, -1};
      std::vector<bool> used(blocks.size(), false);
      int c = s;
      while (c != t) {
        int bi = -1, nxt = -1;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
          if (used[i]) continue;
          std::set<int> bv;
          for (const auto& [u, v] : blocks[i]) {
            bv.insert(u);
            bv.insert(v);
          }
          if (!bv.count(c)) continue;
          for (int x : bv)
            if (x != c && interfaces.count(x)) {
              bi = static_cast<int>(i);
              nxt = x;
            }
          break;
        }
        if (bi < 0) throw GraphError("series decomposition broke");
        used[static_cast<std::size_t>(bi)] = true;
        node.edges.push_back({c, nxt, decompose(blocks[static_cast<std::size_t>(bi)], c, nxt)});
        c = nxt;
      }
      return add(std::move(node));
    }

    // Rigid case: contract the maximal split pairs of H + (s,t).
    EdgeList K = H;
    K.emplace_back(std::min(s, t), std::max(s, t));
    auto kadj = adjacency(K);
    std::set<std::pair<int, int>> pair_set;
    for (const auto& [a, _] : kadj) {
      EdgeList rem;
      for (const auto& ed : K)
        if (ed.first != a && ed.second != a) rem.push_back(ed);
      std::vector<int> rv;
      Graph rg = to_graph(rem, rv);
      for (int bl : articulation_points(rg)) {
        int b = rv[static_cast<std::size_t>(bl)];
        pair_set.insert({std::min(a, b), std::max(a, b)});
      }
    }
    struct Pair {
      int a, b;
      std::set<int> w;  // pertinent vertex set including the pair
    };
    std::vector<Pair> pairs;
    for (const auto& [a, b] : pair_set) {
      auto comps2 = components_minus(kadj, {a, b});
      int ref_anchor = (s != a && s != b) ? s : t;
      std::set<int> w{a, b};
      for (const auto& comp : comps2)
        if (std::find(comp.begin(), comp.end(), ref_anchor) == comp.end())
          w.insert(comp.begin(), comp.end());
      if (w.size() == 2) continue;  // no pertinent side
      pairs.push_back({a, b, std::move(w)});
    }
    std::vector<bool> maximal(pairs.size(), true);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        if (p == q || !maximal[p]) continue;
        bool subset = std::includes(pairs[q].w.begin(), pairs[q].w.end(), pairs[p].w.begin(),
                                    pairs[p].w.end());
        if (!subset) continue;
        if (pairs[p].w.size() < pairs[q].w.size() ||
            std::make_pair(pairs[q].a, pairs[q].b) < std::make_pair(pairs[p].a, pairs[p].b))
          maximal[p] = false;
      }

    SpqrNode node{SpqrType::R, s, t, {}, -1};
    std::vector<bool> taken(H.size(), false);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (!maximal[p]) continue;
      EdgeList part;
      for (std::size_t ei = 0; ei < H.size(); ++ei) {
        if (taken[ei]) continue;
        if (pairs[p].w.count(H[ei].first) && pairs[p].w.count(H[ei].second)) {
          part.push_back(H[ei]);
          taken[ei] = true;
        }
      }
      assert(!part.empty());
      node.edges.push_back({pairs[p].a, pairs[p].b, decompose(part, pairs[p].a, pairs[p].b)});
    }
    for (std::size_t ei = 0; ei < H.size(); ++ei)
      if (!taken[ei])
        node.edges.push_back(
            {H[ei].first, H[ei].second, decompose({H[ei]}, H[ei].first, H[ei].second)});

    // Tripwire: the skeleton plus the reference edge must be triconnected.
    EdgeList skel;
    for (const auto& se : node.edges) skel.emplace_back(se.u, se.v);
    skel.emplace_back(std::min(s, t), std::max(s, t));
    std::vector<int> sv;
    Graph sg = to_graph(skel, sv);
    if (!is_triconnected(sg)) throw GraphError("rigid skeleton is not triconnected");
    return add(std::move(node));
  }
};

}  // namespace

SpqrTree build_spqr(const Graph& g, std::pair<int, int> root_edge) {
  if (!is_biconnected(g)) throw NotBiconnected("SPQR decomposition needs a biconnected graph");
  auto [rs, rt] = root_edge;
  if (!g.has_edge(rs, rt)) throw GraphError("root edge absent");

  SpqrBuilder builder;
  builder.add({SpqrType::Q, rs, rt, {}, -1});
  EdgeList H;
  for (const auto& [u, v] : g.edges())
    if (!((u == rs && v == rt) || (u == rt && v == rs))) H.emplace_back(u, v);
  if (!H.empty()) {
    int child = builder.decompose(H, rs, rt);
    builder.nodes[0].edges.push_back({rs, rt, child});
  }
  SpqrTree tree{std::move(builder.nodes), 0};
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    for (const auto& se : tree.nodes[i].edges)
      if (se.child >= 0) tree.nodes[static_cast<std::size_t>(se.child)].parent = static_cast<int>(i);
  return tree;
}

std::vector<std::pair<int, int>> SpqrTree::pertinent_edges(int node) const {
  std::vector<std::pair<int, int>> out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const SpqrNode& nd = nodes[static_cast<std::size_t>(id)];
    if (nd.type == SpqrType::Q && (nd.edges.empty() || id == root))
      out.emplace_back(std::min(nd.s, nd.t), std::max(nd.s, nd.t));
    for (const auto& se : nd.edges)
      if (se.child >= 0) stack.push_back(se.child);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int SpqrTree::pertinent_degree(int node, int v) const {
  int d = 0;
  for (const auto& [u, w] : pertinent_edges(node))
    if (u == v || w == v) ++d;
  return d;
}

// ---------------------------------------------------------------------------
// BC-tree.
// ---------------------------------------------------------------------------

bool BcTree::is_cut_vertex(int v) const {
  return std::find(cut_vertices.begin(), cut_vertices.end(), v) != cut_vertices.end();
}

BcTree build_bc_tree(const Graph& g) {
  if (!is_connected(g)) throw NotConnected("BC-tree needs a connected graph");
  BcTree tree;
  tree.blocks = biconnected_edge_components(g);
  tree.cut_vertices = articulation_points(g);
  std::set<int> cuts(tree.cut_vertices.begin(), tree.cut_vertices.end());
  for (const auto& blk : tree.blocks) {
    std::set<int> bc;
    for (const auto& [u, v] : blk) {
      if (cuts.count(u)) bc.insert(u);
      if (cuts.count(v)) bc.insert(v);
    }
    tree.block_cuts.emplace_back(bc.begin(), bc.end());
  }
  return tree;
}

}  // namespace slopes
