#pragma once

// EDD-NSTE: root the approximated Steiner tree at the cloud through its
// best-connected node, then walk it depth-first against the length budget.
// Destinations that run over the budget are reconnected straight to the
// cloud and given the chance to adopt nearby subtrees.

#include <queue>
#include <vector>

#include "edd/graph.hpp"
#include "edd/steiner.hpp"

namespace edd {

// Distribution tree rooted at the cloud. Children lists are kept ascending;
// path_length is gamma-inclusive and infinity for nodes outside the tree.
struct RootedDistributionTree {
  NodeId root_server = 0;
  std::vector<NodeId> parent;                 // -1 outside the tree, kCloud at the root server
  std::vector<std::vector<NodeId>> children;  // index 0 holds the cloud's children
  std::vector<Weight> path_length;
};

// Attach the Steiner tree's highest-degree node (smallest id on ties) to the
// cloud and orient everything away from it.
inline RootedDistributionTree root_tree(const SteinerTree& st, const EddInstance& instance) {
  if (st.vertices.empty()) throw std::invalid_argument("empty steiner tree");
  const auto& net = instance.network();
  const int n = net.node_count();

  std::vector<int> degree(n + 1, 0);
  for (const auto& e : st.edges) {
    net.edge_weight(e.u, e.v);  // tree edges must be physical links
    ++degree[e.u];
    ++degree[e.v];
  }
  NodeId root = st.vertices.front();
  for (NodeId v : st.vertices)
    if (degree[v] > degree[root]) root = v;  // vertices ascend: ties keep the smaller id

  RootedDistributionTree tree;
  tree.root_server = root;
  tree.parent.assign(n + 1, -1);
  tree.children.assign(n + 1, {});
  tree.path_length.assign(n + 1, kInfiniteLength);
  tree.path_length[kCloud] = 0;

  std::vector<std::vector<std::pair<NodeId, Weight>>> adj(n + 1);
  for (const auto& e : st.edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());

  tree.parent[root] = kCloud;
  tree.children[kCloud].push_back(root);
  tree.path_length[root] = instance.gamma();
  std::queue<NodeId> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (auto [v, w] : adj[u]) {
      if (tree.parent[v] != -1 || v == root) continue;
      tree.parent[v] = u;
      tree.children[u].push_back(v);  // ascending because adj is sorted
      tree.path_length[v] = tree.path_length[u] + w;
      frontier.push(v);
    }
  }
  return tree;
}

namespace detail {

struct SliceResult {
  std::vector<NodeId> c2e;
  std::vector<std::pair<NodeId, NodeId>> e2e;
};

// Shared by edd_nste (on the real network) and edd_a (on the hop-expanded
// network). Consumes the tree.
inline SliceResult slice_finetune_impl(const EdgeServerNetwork& net,
                                       const std::vector<char>& is_dest, Weight gamma,
                                       Weight l_limit, RootedDistributionTree tree) {
  const int n = net.node_count();
  auto& parent = tree.parent;
  auto& children = tree.children;
  auto& pl = tree.path_length;

  std::vector<char> visited(n + 1, false);
  std::vector<NodeId> final_parent(n + 1, -1);

  auto detach = [&](NodeId v) {
    auto& ch = children[parent[v]];
    ch.erase(std::find(ch.begin(), ch.end(), v));
  };
  auto attach = [&](NodeId p, NodeId v) {
    parent[v] = p;
    auto& ch = children[p];
    ch.insert(std::upper_bound(ch.begin(), ch.end(), v), v);
  };
  auto refresh_depths = [&] {
    std::queue<NodeId> queue;
    queue.push(kCloud);
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop();
      for (NodeId v : children[u]) {
        pl[v] = u == kCloud ? gamma : pl[u] + net.edge_weight(u, v);
        queue.push(v);
      }
    }
  };

  // Depth-first in ascending child order. A reconnection mutates the tree,
  // so the walk restarts; visited flags make each node's case fire once.
  bool restart = true;
  while (restart) {
    restart = false;
    std::vector<NodeId> stack{kCloud};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      if (v != kCloud && !visited[v]) {
        visited[v] = true;
        if (!is_dest[v] || pl[v] <= l_limit) {
          final_parent[v] = parent[v];  // non-destinations kept even beyond the budget
        } else {
          // Over-budget destination: feed it from the cloud, then let it
          // adopt any graph neighbor it reaches more cheaply.
          detach(v);
          attach(kCloud, v);
          pl[v] = gamma;
          final_parent[v] = kCloud;
          for (auto [u, w] : net.neighbors(v)) {
            if (pl[u] > pl[v] + w && pl[v] + w <= l_limit && parent[u] != v &&
                parent[v] != u) {
              if (parent[u] != -1) detach(u);
              attach(v, u);
              pl[u] = pl[v] + w;
            }
          }
          refresh_depths();
          restart = true;
          break;
        }
      }
      const auto& ch = children[v];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  }

  // Drop edges that no longer lead to any destination.
  std::vector<std::vector<NodeId>> kept_children(n + 1);
  std::vector<NodeId> order;
  for (NodeId v = 1; v <= n; ++v)
    if (final_parent[v] == kCloud) order.push_back(v);
  for (NodeId v = 1; v <= n; ++v)
    if (final_parent[v] > 0) kept_children[final_parent[v]].push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (NodeId c : kept_children[order[head]]) order.push_back(c);

  std::vector<char> keep(n + 1, false);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    keep[v] = is_dest[v];
    for (NodeId c : kept_children[v]) keep[v] |= keep[c];
  }

  SliceResult result;
  for (NodeId v = 1; v <= n; ++v) {
    if (!keep[v]) continue;
    if (final_parent[v] == kCloud)
      result.c2e.push_back(v);
    else if (final_parent[v] > 0)
      result.e2e.push_back({final_parent[v], v});
  }
  return result;
}

}  // namespace detail

inline EddSolution slice_and_finetune(const RootedDistributionTree& tree,
                                      const EddInstance& instance) {
  std::vector<char> is_dest(instance.network().node_count() + 1, false);
  for (NodeId r : instance.destinations()) is_dest[r] = true;
  auto sliced = detail::slice_finetune_impl(instance.network(), is_dest, instance.gamma(),
                                            instance.l_limit(), tree);
  return solution_cost(instance, std::move(sliced.c2e), sliced.e2e);
}

inline EddSolution edd_nste(const EddInstance& instance, const MetricClosure& closure) {
  auto st = approximate_steiner(instance, closure);
  return slice_and_finetune(root_tree(st, instance), instance);
}

inline EddSolution edd_nste(const EddInstance& instance) {
  return edd_nste(instance, all_pairs_shortest(instance.network()));
}

}  // namespace edd
