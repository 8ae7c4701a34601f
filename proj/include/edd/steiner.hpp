#pragma once

// Network Steiner tree approximation by triple loss contraction. The save
// table gives, for each terminal pair, the spanning-tree weight recovered by
// contracting that pair's closure edge to zero; a triple is accepted while
// its win (max save + min save - centroid star cost) stays positive.

#include <array>
#include <map>
#include <set>
#include <vector>

#include "edd/graph.hpp"

namespace edd {

struct Triple {
  std::array<NodeId, 3> members{};  // ascending
  NodeId centroid = 0;
  Weight d_z = 0;  // sum of closure distances centroid -> members

  friend bool operator==(const Triple&, const Triple&) = default;
};

class SaveTable {
 public:
  SaveTable() = default;

  explicit SaveTable(std::vector<NodeId> terminals) : terms_(std::move(terminals)) {
    std::sort(terms_.begin(), terms_.end());
    table_.assign(terms_.size() * terms_.size(), 0);
  }

  bool empty() const { return terms_.empty(); }
  const std::vector<NodeId>& terminals() const { return terms_; }

  Weight save(NodeId a, NodeId b) const { return table_[slot(a) * terms_.size() + slot(b)]; }

  void set_save(NodeId a, NodeId b, Weight value) {
    table_[slot(a) * terms_.size() + slot(b)] = value;
    table_[slot(b) * terms_.size() + slot(a)] = value;
  }

 private:
  std::size_t slot(NodeId v) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), v);
    if (it == terms_.end() || *it != v) throw std::invalid_argument("unknown terminal");
    return static_cast<std::size_t>(it - terms_.begin());
  }

  std::vector<NodeId> terms_;
  std::vector<Weight> table_;
};

struct SteinerTree {
  std::vector<NodeId> vertices;     // includes R plus any Steiner points
  std::vector<WeightedEdge> edges;  // real network edges
  Weight total_weight = 0;
};

namespace detail {

inline void find_save_rec(const std::vector<WeightedEdge>& edges,
                          const std::vector<NodeId>& vertices, SaveTable& table) {
  if (edges.empty()) return;

  // Heaviest edge; ties go to the smallest (min id, max id) pair.
  std::size_t heavy = 0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const auto& a = edges[i];
    const auto& b = edges[heavy];
    if (std::tie(a.w, b.u, b.v) > std::tie(b.w, a.u, a.v)) heavy = i;
  }
  const WeightedEdge cut = edges[heavy];

  // Split into the two components joined by the cut edge.
  std::map<NodeId, std::vector<std::pair<NodeId, std::size_t>>> adj;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i == heavy) continue;
    adj[edges[i].u].push_back({edges[i].v, i});
    adj[edges[i].v].push_back({edges[i].u, i});
  }
  std::set<NodeId> side;
  std::vector<NodeId> stack{cut.u};
  side.insert(cut.u);
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (auto [v, idx] : adj[u])
      if (side.insert(v).second) stack.push_back(v);
  }

  std::vector<NodeId> left, right;
  std::vector<WeightedEdge> left_edges, right_edges;
  for (NodeId v : vertices) (side.count(v) ? left : right).push_back(v);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i == heavy) continue;
    (side.count(edges[i].u) ? left_edges : right_edges).push_back(edges[i]);
  }

  for (NodeId a : left)
    for (NodeId b : right) table.set_save(a, b, cut.w);

  find_save_rec(left_edges, left, table);
  find_save_rec(right_edges, right, table);
}

}  // namespace detail

// Recursive save computation over a spanning tree of the terminals: remove
// the heaviest edge, charge its weight to every pair split apart, recurse.
// Equivalent to mst(F) - mst(F with the pair's edge contracted).
inline SaveTable find_save(const std::vector<WeightedEdge>& tree_edges,
                           std::vector<NodeId> terminals) {
  SaveTable table(std::move(terminals));
  detail::find_save_rec(tree_edges, table.terminals(), table);
  return table;
}

// All 3-subsets of R with their centroid chosen among non-destination
// servers (smallest id on ties). Triples with no available centroid are
// dropped; |R| < 3 yields the empty list.
inline std::vector<Triple> enumerate_triples(const EddInstance& instance,
                                             const MetricClosure& closure) {
  const auto& dests = instance.destinations();
  std::vector<Triple> out;
  if (dests.size() < 3) return out;

  std::vector<NodeId> candidates;
  for (NodeId v = 1; v <= instance.network().node_count(); ++v)
    if (!instance.is_destination(v)) candidates.push_back(v);
  if (candidates.empty()) return out;

  for (std::size_t i = 0; i < dests.size(); ++i) {
    for (std::size_t j = i + 1; j < dests.size(); ++j) {
      for (std::size_t k = j + 1; k < dests.size(); ++k) {
        Triple t;
        t.members = {dests[i], dests[j], dests[k]};
        Weight best = kInfiniteLength;
        for (NodeId v : candidates) {
          Weight sum = closure.dist(v, dests[i]) + closure.dist(v, dests[j]) +
                       closure.dist(v, dests[k]);
          if (sum < best) {
            best = sum;
            t.centroid = v;  // candidates ascend, so first win is smallest id
          }
        }
        t.d_z = best;
        out.push_back(t);
      }
    }
  }
  return out;
}

// Triple loss contraction over the closure of R, then a spanning tree of
// the closure on R plus accepted centroids, expanded back into real shortest
// paths and pruned to terminal leaves.
inline SteinerTree approximate_steiner(const EddInstance& instance,
                                       const MetricClosure& closure) {
  const auto& dests = instance.destinations();
  const std::size_t r = dests.size();

  if (r == 1) return SteinerTree{{dests[0]}, {}, 0};

  std::vector<NodeId> steiner_points;
  if (r >= 3) {
    const auto triples = enumerate_triples(instance, closure);

    // F starts as the closure induced on R; contraction zeroes pair weights.
    std::vector<Weight> f(r * r, 0);
    auto slot = [&](NodeId v) {
      return static_cast<std::size_t>(
          std::lower_bound(dests.begin(), dests.end(), v) - dests.begin());
    };
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        f[i * r + j] = closure.dist(dests[i], dests[j]);

    // Win strictly shrinks the spanning-tree mass, but cap the loop anyway.
    for (std::size_t round = 0; !triples.empty() && round + 2 < r; ++round) {
      std::vector<WeightedEdge> f_edges;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
          f_edges.push_back({dests[i], dests[j], f[i * r + j]});
      auto mst = minimum_spanning_tree(dests, f_edges);
      auto saves = find_save(mst.edges, dests);

      const Triple* best = nullptr;
      Weight best_win = 0;
      for (const auto& z : triples) {
        Weight s01 = saves.save(z.members[0], z.members[1]);
        Weight s02 = saves.save(z.members[0], z.members[2]);
        Weight s12 = saves.save(z.members[1], z.members[2]);
        Weight win = std::max({s01, s02, s12}) + std::min({s01, s02, s12}) - z.d_z;
        if (win > best_win || (best && win == best_win && z.members < best->members)) {
          best_win = win;
          best = &z;
        }
      }
      if (!best || best_win <= 0) break;

      const auto [a, b, c] = best->members;
      f[slot(a) * r + slot(b)] = f[slot(b) * r + slot(a)] = 0;
      f[slot(b) * r + slot(c)] = f[slot(c) * r + slot(b)] = 0;
      steiner_points.push_back(best->centroid);
    }
  }

  std::vector<NodeId> pool(dests.begin(), dests.end());
  pool.insert(pool.end(), steiner_points.begin(), steiner_points.end());
  auto closure_mst = minimum_spanning_tree(induce(closure, pool));

  // Expand closure edges into physical shortest paths, counting each real
  // edge once.
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<WeightedEdge> real_edges;
  std::set<NodeId> vertex_set;
  for (const auto& e : closure_mst.edges) {
    auto nodes = closure.path(e.u, e.v);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      auto key = std::minmax(nodes[i], nodes[i + 1]);
      vertex_set.insert(nodes[i]);
      vertex_set.insert(nodes[i + 1]);
      if (seen.insert(key).second)
        real_edges.push_back(
            {key.first, key.second, instance.network().edge_weight(key.first, key.second)});
    }
  }
  if (real_edges.empty()) vertex_set.insert(dests.begin(), dests.end());

  // Overlapping expansions can close a cycle; fall back to a spanning tree
  // of the expanded subgraph before pruning.
  std::vector<NodeId> verts(vertex_set.begin(), vertex_set.end());
  if (real_edges.size() + 1 > verts.size())
    real_edges = minimum_spanning_tree(verts, real_edges).edges;

  // Drop non-terminal leaves until only destinations remain at the fringe.
  std::map<NodeId, int> degree;
  for (const auto& e : real_edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  bool pruned = true;
  while (pruned) {
    pruned = false;
    for (auto it = real_edges.begin(); it != real_edges.end();) {
      NodeId leaf = 0;
      if (degree[it->u] == 1 && !instance.is_destination(it->u))
        leaf = it->u;
      else if (degree[it->v] == 1 && !instance.is_destination(it->v))
        leaf = it->v;
      if (leaf != 0) {
        --degree[it->u];
        --degree[it->v];
        if (degree[it->u] == 0) vertex_set.erase(it->u);
        if (degree[it->v] == 0) vertex_set.erase(it->v);
        it = real_edges.erase(it);
        pruned = true;
      } else {
        ++it;
      }
    }
  }

  SteinerTree tree;
  tree.vertices.assign(vertex_set.begin(), vertex_set.end());
  tree.edges = std::move(real_edges);
  std::sort(tree.edges.begin(), tree.edges.end());
  for (const auto& e : tree.edges) tree.total_weight += e.w;
  return tree;
}

}  // namespace edd
