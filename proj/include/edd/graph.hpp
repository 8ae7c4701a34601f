#pragma once

// Core model for edge data distribution: the edge-server network graph,
// shortest paths / metric closure, spanning trees, and pricing/validation
// of distribution solutions. Everything is integer arithmetic; all
// tie-breaks are by smallest node id so results are reproducible.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edd {

using NodeId = int;
using Weight = long long;

// Virtual cloud vertex. Edge servers are 1..N; cloud-to-edge links are
// implicit with uniform weight gamma and never stored in the adjacency.
inline constexpr NodeId kCloud = 0;

inline constexpr Weight kInfiniteLength = std::numeric_limits<Weight>::max() / 4;

// Undirected link, kept canonical with u < v.
struct WeightedEdge {
  NodeId u = 0;
  NodeId v = 0;
  Weight w = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
  friend auto operator<=>(const WeightedEdge&, const WeightedEdge&) = default;
};

// Directed transmission (parent feeds child). from == kCloud marks a C2E edge.
struct Arc {
  NodeId from = 0;
  NodeId to = 0;
  Weight w = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

inline WeightedEdge make_edge(NodeId a, NodeId b, Weight w) {
  return a < b ? WeightedEdge{a, b, w} : WeightedEdge{b, a, w};
}

namespace detail {

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

}  // namespace detail

// Weighted undirected graph on edge servers 1..N. Immutable after
// construction; the constructor rejects self-loops, duplicate edges,
// non-positive weights and disconnected server subgraphs.
class EdgeServerNetwork {
 public:
  EdgeServerNetwork(int node_count, std::vector<WeightedEdge> edges,
                    std::vector<std::pair<double, double>> coords = {})
      : node_count_(node_count), coords_(std::move(coords)) {
    if (node_count < 1) throw std::invalid_argument("node count must be positive");
    for (auto& e : edges) {
      if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u < 1 || e.v > node_count)
        throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                    std::to_string(e.v));
      if (e.w < 1) throw std::invalid_argument("edge weight must be >= 1");
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i)
      if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
        throw std::invalid_argument("duplicate edge " + std::to_string(edges[i].u) + "-" +
                                    std::to_string(edges[i].v));
    if (!coords_.empty() && static_cast<int>(coords_.size()) != node_count)
      throw std::invalid_argument("coordinate list does not match node count");
    edges_ = std::move(edges);

    adjacency_.assign(node_count + 1, {});
    for (const auto& e : edges_) {
      adjacency_[e.u].push_back({e.v, e.w});
      adjacency_[e.v].push_back({e.u, e.w});
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    detail::DisjointSet dsu(node_count + 1);
    int components = node_count;
    for (const auto& e : edges_)
      if (dsu.unite(e.u, e.v)) --components;
    if (components != 1) throw std::runtime_error("disconnected");
  }

  int node_count() const { return node_count_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  // Neighbors of v, ascending by node id.
  std::span<const std::pair<NodeId, Weight>> neighbors(NodeId v) const {
    return adjacency_.at(v);
  }

  bool has_edge(NodeId a, NodeId b) const { return find_weight(a, b) != nullptr; }

  Weight edge_weight(NodeId a, NodeId b) const {
    const Weight* w = find_weight(a, b);
    if (!w)
      throw std::invalid_argument("no edge " + std::to_string(a) + "-" + std::to_string(b));
    return *w;
  }

  Weight max_edge_weight() const {
    Weight m = 0;
    for (const auto& e : edges_) m = std::max(m, e.w);
    return m;
  }

  // Optional station coordinates (latitude, longitude); metadata only.
  const std::vector<std::pair<double, double>>& coords() const { return coords_; }

 private:
  const Weight* find_weight(NodeId a, NodeId b) const {
    if (a < 1 || a > node_count_ || b < 1 || b > node_count_) return nullptr;
    const auto& nbrs = adjacency_[a];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                               [](const auto& p, NodeId x) { return p.first < x; });
    if (it == nbrs.end() || it->first != b) return nullptr;
    return &it->second;
  }

  int node_count_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<std::pair<NodeId, Weight>>> adjacency_;
  std::vector<std::pair<double, double>> coords_;
};

// All-pairs shortest distances over edge servers with path reconstruction.
// next_hop(u, v) is the first node after u on the reconstructed u-v path;
// among equally short continuations the smallest node id wins.
class MetricClosure {
 public:
  MetricClosure(int n, std::vector<Weight> dist, std::vector<NodeId> next)
      : n_(n), dist_(std::move(dist)), next_(std::move(next)) {}

  int node_count() const { return n_; }

  Weight dist(NodeId u, NodeId v) const { return dist_[index(u, v)]; }

  NodeId next_hop(NodeId u, NodeId v) const { return next_[index(u, v)]; }

  // Node sequence of the reconstructed shortest path, endpoints included.
  std::vector<NodeId> path(NodeId u, NodeId v) const {
    std::vector<NodeId> seq{u};
    while (u != v) {
      u = next_hop(u, v);
      seq.push_back(u);
    }
    return seq;
  }

 private:
  std::size_t index(NodeId u, NodeId v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_)
      throw std::invalid_argument("node id out of range");
    return static_cast<std::size_t>(u) * (n_ + 1) + v;
  }

  int n_;
  std::vector<Weight> dist_;
  std::vector<NodeId> next_;
};

// Dijkstra from every server. The closure of a valid network is finite
// and symmetric with a zero diagonal.
inline MetricClosure all_pairs_shortest(const EdgeServerNetwork& net) {
  const int n = net.node_count();
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  std::vector<Weight> dist(stride * stride, kInfiniteLength);
  std::vector<NodeId> next(stride * stride, 0);

  std::vector<Weight> d(n + 1);
  for (NodeId s = 1; s <= n; ++s) {
    std::fill(d.begin(), d.end(), kInfiniteLength);
    d[s] = 0;
    using Item = std::pair<Weight, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0, s});
    while (!queue.empty()) {
      auto [du, u] = queue.top();
      queue.pop();
      if (du != d[u]) continue;
      for (auto [v, w] : net.neighbors(u)) {
        if (du + w < d[v]) {
          d[v] = du + w;
          queue.push({d[v], v});
        }
      }
    }
    for (NodeId v = 1; v <= n; ++v) {
      if (d[v] >= kInfiniteLength) throw std::runtime_error("disconnected");
      dist[static_cast<std::size_t>(s) * stride + v] = d[v];
    }
  }

  // First hop with the smallest id among shortest continuations.
  for (NodeId u = 1; u <= n; ++u) {
    for (NodeId v = 1; v <= n; ++v) {
      if (u == v) continue;
      const Weight duv = dist[static_cast<std::size_t>(u) * stride + v];
      for (auto [x, w] : net.neighbors(u)) {
        if (w + dist[static_cast<std::size_t>(x) * stride + v] == duv) {
          next[static_cast<std::size_t>(u) * stride + v] = x;
          break;  // neighbors ascend by id
        }
      }
    }
  }
  return MetricClosure(n, std::move(dist), std::move(next));
}

// Complete graph on a vertex subset weighted by closure distances. A view:
// it references the closure it was made from.
class InducedGraph {
 public:
  InducedGraph(const MetricClosure& closure, std::vector<NodeId> vertices)
      : closure_(&closure), vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    for (NodeId v : vertices_)
      if (v < 1 || v > closure.node_count())
        throw std::invalid_argument("subset member out of range: " + std::to_string(v));
  }

  const std::vector<NodeId>& vertices() const { return vertices_; }

  std::vector<WeightedEdge> edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(vertices_.size() * (vertices_.size() - 1) / 2);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        out.push_back({vertices_[i], vertices_[j], closure_->dist(vertices_[i], vertices_[j])});
    return out;
  }

  const MetricClosure& closure() const { return *closure_; }

 private:
  const MetricClosure* closure_;
  std::vector<NodeId> vertices_;
};

inline InducedGraph induce(const MetricClosure& closure, std::span<const NodeId> subset) {
  return InducedGraph(closure, std::vector<NodeId>(subset.begin(), subset.end()));
}

struct MstResult {
  std::vector<WeightedEdge> edges;
  Weight total_weight = 0;
};

// Kruskal with (w, min id, max id) ordering so the tree is deterministic.
inline MstResult minimum_spanning_tree(std::span<const NodeId> vertices,
                                       std::vector<WeightedEdge> candidate_edges) {
  if (vertices.empty()) throw std::invalid_argument("empty vertex set");
  std::vector<NodeId> verts(vertices.begin(), vertices.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  std::vector<int> slot(verts.back() + 1, -1);
  for (std::size_t i = 0; i < verts.size(); ++i) slot[verts[i]] = static_cast<int>(i);

  for (auto& e : candidate_edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(candidate_edges.begin(), candidate_edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
            });

  MstResult result;
  detail::DisjointSet dsu(static_cast<int>(verts.size()));
  std::size_t joined = 1;
  for (const auto& e : candidate_edges) {
    if (joined == verts.size()) break;
    int su = e.u <= verts.back() ? slot[e.u] : -1;
    int sv = e.v <= verts.back() ? slot[e.v] : -1;
    if (su < 0 || sv < 0)
      throw std::invalid_argument("edge endpoint outside vertex set");
    if (dsu.unite(su, sv)) {
      result.edges.push_back(e);
      result.total_weight += e.w;
      ++joined;
    }
  }
  if (joined != verts.size()) throw std::runtime_error("disconnected");
  return result;
}

inline MstResult minimum_spanning_tree(const InducedGraph& graph) {
  return minimum_spanning_tree(graph.vertices(), graph.edges());
}

// One solvable problem: network + destinations R + C2E cost gamma + the
// end-to-end length budget. l_limit >= gamma or no destination is servable.
class EddInstance {
 public:
  EddInstance(EdgeServerNetwork network, std::vector<NodeId> destinations, Weight gamma,
              Weight l_limit)
      : network_(std::move(network)),
        destinations_(std::move(destinations)),
        gamma_(gamma),
        l_limit_(l_limit),
        is_destination_(network_.node_count() + 1, false) {
    if (destinations_.empty()) throw std::invalid_argument("destination set empty");
    std::sort(destinations_.begin(), destinations_.end());
    if (std::adjacent_find(destinations_.begin(), destinations_.end()) != destinations_.end())
      throw std::invalid_argument("duplicate destination");
    for (NodeId r : destinations_)
      if (r < 1 || r > network_.node_count())
        throw std::invalid_argument("destination out of range: " + std::to_string(r));
    if (gamma_ < 1) throw std::invalid_argument("gamma must be positive");
    if (l_limit_ < gamma_) throw std::invalid_argument("l_limit below gamma");
    for (NodeId r : destinations_) is_destination_[r] = true;
  }

  const EdgeServerNetwork& network() const { return network_; }
  const std::vector<NodeId>& destinations() const { return destinations_; }
  bool is_destination(NodeId v) const { return is_destination_.at(v); }
  Weight gamma() const { return gamma_; }
  Weight l_limit() const { return l_limit_; }

  // Edge-network budget left after the mandatory C2E hop.
  Weight slack() const { return l_limit_ - gamma_; }

 private:
  EdgeServerNetwork network_;
  std::vector<NodeId> destinations_;
  Weight gamma_;
  Weight l_limit_;
  std::vector<char> is_destination_;
};

// Output of every solver: transits fed from the cloud, directed E2E edges,
// per-node depth in length units, and the cost split.
struct EddSolution {
  std::vector<NodeId> c2e;   // sorted transit servers
  std::vector<Arc> e2e;      // parent -> child, sorted by (from, to)
  std::vector<Weight> depth; // indexed 1..N; -1 where not covered
  Weight cost_c2e = 0;
  Weight cost_e2e = 0;
  Weight total_cost = 0;

  bool covered(NodeId v) const {
    return v >= 1 && v < static_cast<NodeId>(depth.size()) && depth[v] >= 0;
  }
};

struct FeasibilityReport {
  bool pass = true;
  std::vector<std::string> violations;

  void fail(std::string what) {
    pass = false;
    violations.push_back(std::move(what));
  }
};

// Prices a candidate: fills depths by traversal from the cloud and sums the
// two cost components. Deliberately does not check l_limit so infeasible
// candidates can still be priced; validate_solution does the checking.
inline EddSolution solution_cost(const EddInstance& instance, std::vector<NodeId> c2e,
                                 const std::vector<std::pair<NodeId, NodeId>>& e2e) {
  const auto& net = instance.network();
  const int n = net.node_count();

  std::sort(c2e.begin(), c2e.end());
  c2e.erase(std::unique(c2e.begin(), c2e.end()), c2e.end());
  for (NodeId v : c2e)
    if (v < 1 || v > n) throw std::invalid_argument("transit out of range");

  EddSolution sol;
  sol.depth.assign(n + 1, -1);

  std::vector<NodeId> parent(n + 1, -1);
  for (NodeId v : c2e) parent[v] = kCloud;
  std::vector<std::vector<NodeId>> children(n + 1);
  for (auto [u, v] : e2e) {
    Weight w = net.edge_weight(u, v);  // throws on unknown edges
    if (parent[v] != -1) throw std::invalid_argument("not a forest");
    parent[v] = u;
    children[u].push_back(v);
    sol.e2e.push_back({u, v, w});
  }

  std::queue<NodeId> frontier;
  for (NodeId v : c2e) {
    sol.depth[v] = instance.gamma();
    frontier.push(v);
  }
  std::size_t reached = c2e.size();
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : children[u]) {
      sol.depth[v] = sol.depth[u] + net.edge_weight(u, v);
      frontier.push(v);
      ++reached;
    }
  }
  if (reached != c2e.size() + e2e.size())
    throw std::invalid_argument("not a forest");  // cycle or parent never fed

  sol.c2e = std::move(c2e);
  std::sort(sol.e2e.begin(), sol.e2e.end());
  sol.cost_c2e = instance.gamma() * static_cast<Weight>(sol.c2e.size());
  for (const auto& a : sol.e2e) sol.cost_e2e += a.w;
  sol.total_cost = sol.cost_c2e + sol.cost_e2e;
  return sol;
}

// Checks every solution invariant. Violations are report entries, never
// exceptions, so solver fuzzing can collect them.
inline FeasibilityReport validate_solution(const EddInstance& instance, const EddSolution& sol) {
  const auto& net = instance.network();
  const int n = net.node_count();
  FeasibilityReport report;

  if (static_cast<int>(sol.depth.size()) != n + 1) {
    report.fail("non-arborescence: depth map has wrong size");
    return report;
  }

  std::vector<NodeId> parent(n + 1, -1);
  bool structure_ok = true;
  for (NodeId v : sol.c2e) {
    if (v < 1 || v > n) {
      report.fail("non-arborescence: transit out of range");
      return report;
    }
    if (parent[v] != -1) structure_ok = false;
    parent[v] = kCloud;
  }
  std::vector<std::vector<NodeId>> children(n + 1);
  for (const auto& a : sol.e2e) {
    if (a.to < 1 || a.to > n || a.from < 1 || a.from > n) {
      report.fail("non-arborescence: edge endpoint out of range");
      return report;
    }
    if (!net.has_edge(a.from, a.to) || net.edge_weight(a.from, a.to) != a.w) {
      report.fail("non-arborescence: edge " + std::to_string(a.from) + "-" +
                  std::to_string(a.to) + " not in network");
      structure_ok = false;
      continue;
    }
    if (parent[a.to] != -1) {
      report.fail("non-arborescence: node " + std::to_string(a.to) + " has two parents");
      structure_ok = false;
      continue;
    }
    parent[a.to] = a.from;
    children[a.from].push_back(a.to);
  }

  // Depth propagation from the cloud must reach every selected edge.
  std::vector<Weight> depth(n + 1, -1);
  std::queue<NodeId> frontier;
  for (NodeId v : sol.c2e) {
    depth[v] = instance.gamma();
    frontier.push(v);
  }
  std::size_t reached = sol.c2e.size();
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : children[u]) {
      depth[v] = depth[u] + net.edge_weight(u, v);
      frontier.push(v);
      ++reached;
    }
  }
  if (structure_ok && reached != sol.c2e.size() + sol.e2e.size())
    report.fail("non-arborescence: selected edges not reachable from cloud");

  for (NodeId v = 1; v <= n; ++v) {
    if (depth[v] != sol.depth[v]) {
      report.fail("depth overflow: stored depth of node " + std::to_string(v) +
                  " disagrees with traversal");
      break;
    }
  }

  for (NodeId r : instance.destinations()) {
    if (depth[r] < 0)
      report.fail("uncovered destination " + std::to_string(r));
    else if (depth[r] > instance.l_limit())
      report.fail("depth overflow: destination " + std::to_string(r) + " at " +
                  std::to_string(depth[r]) + " > " + std::to_string(instance.l_limit()));
  }

  Weight e2e_sum = 0;
  for (const auto& a : sol.e2e) e2e_sum += a.w;
  if (sol.cost_c2e != instance.gamma() * static_cast<Weight>(sol.c2e.size()))
    report.fail("cost mismatch: cost_c2e");
  if (sol.cost_e2e != e2e_sum) report.fail("cost mismatch: cost_e2e");
  if (sol.total_cost != sol.cost_c2e + sol.cost_e2e) report.fail("cost mismatch: total");
  return report;
}

// The always-available fallback: every destination fed straight from the
// cloud. Feasible whenever l_limit >= gamma, cost exactly gamma * |R|.
inline EddSolution all_direct_solution(const EddInstance& instance) {
  return solution_cost(instance, instance.destinations(), {});
}

}  // namespace edd
