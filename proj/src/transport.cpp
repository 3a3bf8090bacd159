#include "ofdma/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ofdma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Residual-graph min-cost max-flow with Dijkstra over reduced costs.
// Node layout: super source, K sources, M terminals, super sink.
class MinCostFlow {
 public:
  explicit MinCostFlow(int num_nodes) : head_(num_nodes, -1) {}

  void add_edge(int from, int to, double cap, double cost) {
    edges_.push_back({to, head_[from], cap, 0.0, cost});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], 0.0, 0.0, -cost});
    head_[to] = static_cast<int>(edges_.size()) - 1;
  }

  void solve(int source, int sink) {
    const int n = static_cast<int>(head_.size());
    std::vector<double> potential(n, 0.0);  // valid: all costs nonnegative
    std::vector<double> dist(n);
    std::vector<int> parent_edge(n);
    while (true) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(parent_edge.begin(), parent_edge.end(), -1);
      dist[source] = 0.0;
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      pq.push({0.0, source});
      while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (int e = head_[u]; e != -1; e = edges_[e].next) {
          const Edge& ed = edges_[e];
          if (ed.cap - ed.flow <= 0.0) continue;
          const double nd = d + ed.cost + potential[u] - potential[ed.to];
          if (nd < dist[ed.to]) {
            dist[ed.to] = nd;
            parent_edge[ed.to] = e;
            pq.push({nd, ed.to});
          }
        }
      }
      if (parent_edge[sink] == -1) break;
      for (int v = 0; v < n; ++v)
        if (dist[v] < kInf) potential[v] += dist[v];
      double push = kInf;
      for (int v = sink; v != source;) {
        const Edge& ed = edges_[parent_edge[v]];
        push = std::min(push, ed.cap - ed.flow);
        v = edges_[parent_edge[v] ^ 1].to;
      }
      for (int v = sink; v != source;) {
        const int e = parent_edge[v];
        edges_[e].flow += push;
        edges_[e ^ 1].flow -= push;
        v = edges_[e ^ 1].to;
      }
    }
  }

  double flow_on(int edge_id) const { return edges_[edge_id].flow; }

 private:
  struct Edge {
    int to;
    int next;
    double cap;
    double flow;
    double cost;
  };
  std::vector<Edge> edges_;
  std::vector<int> head_;
};

std::vector<double> resolve_weights(const OfdmaInstance& inst,
                                    const std::optional<std::vector<double>>& weights) {
  if (!weights) return std::vector<double>(inst.num_users, 1.0);
  if (static_cast<int>(weights->size()) != inst.num_users)
    throw std::invalid_argument("weights must have length num_users");
  for (double w : *weights)
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
  return *weights;
}

}  // namespace

HitchcockInstance build_hitchcock(const OfdmaInstance& inst,
                                  const std::optional<std::vector<double>>& weights) {
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;
  const std::vector<double> w = resolve_weights(inst, weights);

  Matrix rate(k, std::vector<double>(n, 0.0));
  double cbar = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) {
      rate[i][j] = w[i] * subcarrier_rate(inst.direct_gain[i][j], inst.noise[i][j],
                                          inst.subcarrier_budget[i][j]);
      cbar = std::max(cbar, rate[i][j]);
    }

  HitchcockInstance h;
  h.supplies.assign(k, static_cast<double>(n));
  h.demands.assign(n + 1, 1.0);
  h.demands[n] = static_cast<double>(k - 1) * n;
  h.cost.assign(k, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) h.cost[i][j] = cbar - rate[i][j];
  return h;
}

Matrix solve_transportation(const HitchcockInstance& h) {
  const int k = static_cast<int>(h.supplies.size());
  const int m = static_cast<int>(h.demands.size());
  if (static_cast<int>(h.cost.size()) != k)
    throw std::invalid_argument("cost matrix must have one row per supply");
  double supply_sum = 0.0, demand_sum = 0.0;
  for (double s : h.supplies) {
    if (!(s >= 0.0)) throw std::invalid_argument("supplies must be >= 0");
    supply_sum += s;
  }
  for (double d : h.demands) {
    if (!(d >= 0.0)) throw std::invalid_argument("demands must be >= 0");
    demand_sum += d;
  }
  if (std::abs(supply_sum - demand_sum) > 1e-9 * std::max(1.0, supply_sum))
    throw std::invalid_argument("unbalanced transportation instance");
  for (const auto& row : h.cost) {
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("cost matrix must have one column per demand");
    for (double c : row)
      if (!(c >= 0.0)) throw std::invalid_argument("costs must be >= 0");
  }

  const int source = 0;
  const int sink = 1 + k + m;
  MinCostFlow mcf(k + m + 2);
  std::vector<std::vector<int>> edge_id(k, std::vector<int>(m, -1));
  int next_id = 0;
  for (int i = 0; i < k; ++i) {
    mcf.add_edge(source, 1 + i, h.supplies[i], 0.0);
    next_id += 2;
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) {
      mcf.add_edge(1 + i, 1 + k + j, std::min(h.supplies[i], h.demands[j]), h.cost[i][j]);
      edge_id[i][j] = next_id;
      next_id += 2;
    }
  for (int j = 0; j < m; ++j) {
    mcf.add_edge(1 + k + j, sink, h.demands[j], 0.0);
    next_id += 2;
  }
  mcf.solve(source, sink);

  Matrix flow(k, std::vector<double>(m, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) flow[i][j] = mcf.flow_on(edge_id[i][j]);
  return flow;
}

SumRateSolution max_sum_rate_no_total_budget(const OfdmaInstance& inst,
                                             const std::optional<std::vector<double>>& weights) {
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;
  const std::vector<double> w = resolve_weights(inst, weights);
  const HitchcockInstance h = build_hitchcock(inst, weights);
  const Matrix flow = solve_transportation(h);

  SumRateSolution sol;
  sol.alloc = zero_allocation(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j)
      if (flow[i][j] >= 0.5) sol.alloc.power[i][j] = inst.subcarrier_budget[i][j];
  const RateVector r = rates(inst, sol.alloc);
  for (int i = 0; i < k; ++i) sol.value += w[i] * r[i];
  return sol;
}

}  // namespace ofdma
