#include "epsdist/flow.hpp"

#include <queue>

namespace epsdist {

namespace {

struct Edge {
  std::size_t to;
  std::size_t rev;
  Rational residual;
};

class Graph {
 public:
  explicit Graph(std::size_t n) : adj_(n) {}

  void add(std::size_t from, std::size_t to, const Rational& cap) {
    adj_[from].push_back({to, adj_[to].size(), cap});
    adj_[to].push_back({from, adj_[from].size() - 1, Rational(0)});
  }

  Rational max_flow(std::size_t s, std::size_t t) {
    Rational total;
    std::vector<std::pair<std::size_t, std::size_t>> parent(adj_.size());
    while (true) {
      std::vector<bool> seen(adj_.size(), false);
      std::queue<std::size_t> q;
      q.push(s);
      seen[s] = true;
      while (!q.empty() && !seen[t]) {
        const auto u = q.front();
        q.pop();
        for (std::size_t i = 0; i < adj_[u].size(); ++i) {
          const auto& e = adj_[u][i];
          if (seen[e.to] || sgn(e.residual) <= 0) continue;
          seen[e.to] = true;
          parent[e.to] = {u, i};
          q.push(e.to);
        }
      }
      if (!seen[t]) return total;
      Rational bottleneck = -1;
      for (auto v = t; v != s; v = parent[v].first) {
        const auto& e = adj_[parent[v].first][parent[v].second];
        if (sgn(bottleneck) < 0 || e.residual < bottleneck) bottleneck = e.residual;
      }
      for (auto v = t; v != s; v = parent[v].first) {
        auto& e = adj_[parent[v].first][parent[v].second];
        e.residual -= bottleneck;
        adj_[e.to][e.rev].residual += bottleneck;
      }
      total += bottleneck;
    }
  }

  std::vector<bool> reachable(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& e : adj_[u]) {
        if (!seen[e.to] && sgn(e.residual) > 0) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  std::vector<std::vector<Edge>> adj_;
};

}  // namespace

FlowNetwork build_network(const WeightMap& mu, const WeightMap& nu, const Relation& r) {
  FlowNetwork net;
  net.left_universe = r.rows();
  net.right_universe = r.cols();
  for (const auto& [x, v] : mu) {
    net.left.push_back(x);
    net.source_cap.push_back(v.rational());
  }
  for (const auto& [y, v] : nu) {
    net.right.push_back(y);
    net.sink_cap.push_back(v.rational());
  }
  for (std::size_t i = 0; i < net.left.size(); ++i)
    for (std::size_t j = 0; j < net.right.size(); ++j)
      if (r.contains(net.left[i], net.right[j])) net.middle.emplace_back(i, j);
  return net;
}

MinCut max_flow_min_cut(const FlowNetwork& net) {
  const auto p = net.left.size();
  const auto q = net.right.size();
  const std::size_t source = 0;
  const std::size_t sink = p + q + 1;
  Graph g(p + q + 2);
  for (std::size_t i = 0; i < p; ++i) g.add(source, 1 + i, net.source_cap[i]);
  for (const auto& [i, j] : net.middle) g.add(1 + i, 1 + p + j, Rational(1));
  for (std::size_t j = 0; j < q; ++j) g.add(1 + p + j, sink, net.sink_cap[j]);

  MinCut cut;
  cut.flow = g.max_flow(source, sink);
  const auto u = g.reachable(source);
  cut.left_in_u.assign(u.begin() + 1, u.begin() + 1 + static_cast<std::ptrdiff_t>(p));
  cut.right_in_u.assign(u.begin() + 1 + static_cast<std::ptrdiff_t>(p),
                        u.begin() + 1 + static_cast<std::ptrdiff_t>(p + q));
  return cut;
}

Rational cut_capacity(const FlowNetwork& net, const MinCut& cut) {
  Rational c;
  for (std::size_t i = 0; i < net.left.size(); ++i)
    if (!cut.left_in_u[i]) c += net.source_cap[i];
  for (const auto& [i, j] : net.middle)
    if (cut.left_in_u[i] && !cut.right_in_u[j]) c += 1;
  for (std::size_t j = 0; j < net.right.size(); ++j)
    if (cut.right_in_u[j]) c += net.sink_cap[j];
  return c;
}

WitnessSets extract_witness(const FlowNetwork& net, const MinCut& cut) {
  WitnessSets w{StateSet(net.left_universe), StateSet(net.right_universe)};
  for (std::size_t i = 0; i < net.left.size(); ++i)
    if (cut.left_in_u[i]) w.a.insert(net.left[i]);
  for (std::size_t j = 0; j < net.right.size(); ++j)
    if (cut.right_in_u[j]) w.b.insert(net.right[j]);
  return w;
}

}  // namespace epsdist
