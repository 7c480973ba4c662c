#include "dyncoup/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyncoup {

namespace {

// Sources per parallel batch. Fixed so the accumulation order never depends
// on the number of threads.
constexpr std::size_t kSourceBatch = 64;

/// Scratch space for one Brandes single-source pass.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n) : sigma(n), distance(n), order(n) {}

  std::vector<double> sigma;
  std::vector<std::int64_t> distance;
  std::vector<NodeId> order;
};

/// Writes into `delta` the dependency of `source` on every node: the sum over
/// targets t of the share of shortest source-t paths through that node.
/// delta[source] is left at 0.
void single_source_dependency(const DependencyGraph& graph, NodeId source, BrandesWorkspace& ws,
                              std::span<double> delta) {
  std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
  std::fill(ws.distance.begin(), ws.distance.end(), -1);
  std::fill(delta.begin(), delta.end(), 0.0);

  ws.sigma[source] = 1.0;
  ws.distance[source] = 0;
  ws.order[0] = source;
  std::size_t head = 0;
  std::size_t tail = 1;
  while (head < tail) {
    const NodeId v = ws.order[head++];
    for (NodeId w : graph.neighbors(v)) {
      if (ws.distance[w] < 0) {
        ws.distance[w] = ws.distance[v] + 1;
        ws.order[tail++] = w;
      }
      if (ws.distance[w] == ws.distance[v] + 1) ws.sigma[w] += ws.sigma[v];
    }
  }

  // Back-propagate in reverse BFS order; predecessors are the neighbors one
  // level closer to the source.
  for (std::size_t i = tail; i-- > 1;) {
    const NodeId w = ws.order[i];
    const double share = (1.0 + delta[w]) / ws.sigma[w];
    for (NodeId v : graph.neighbors(w)) {
      if (ws.distance[v] == ws.distance[w] - 1) delta[v] += ws.sigma[v] * share;
    }
  }
  delta[source] = 0.0;
}

void finish_pair_once(std::vector<double>& totals) {
  // every unordered pair was visited from both endpoints
  for (auto& value : totals) value /= 2.0;
}

}  // namespace

std::vector<std::size_t> degree_centrality(const DependencyGraph& graph) {
  std::vector<std::size_t> degree(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) degree[v] = graph.degree(v);
  return degree;
}

std::vector<double> betweenness_centrality_serial(const DependencyGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<double> totals(n, 0.0);
  BrandesWorkspace ws(n);
  std::vector<double> delta(n);
  for (NodeId s = 0; s < n; ++s) {
    single_source_dependency(graph, s, ws, delta);
    for (std::size_t v = 0; v < n; ++v) totals[v] += delta[v];
  }
  finish_pair_once(totals);
  return totals;
}

std::vector<double> betweenness_centrality(const DependencyGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<double> totals(n, 0.0);
  if (n == 0) return totals;

  const std::size_t batch = std::min(kSourceBatch, n);
  std::vector<double> deltas(batch * n);

  for (std::size_t first = 0; first < n; first += batch) {
    const auto count = static_cast<std::int64_t>(std::min(batch, n - first));
#pragma omp parallel
    {
      BrandesWorkspace ws(n);
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t k = 0; k < count; ++k) {
        auto row = std::span<double>(deltas).subspan(static_cast<std::size_t>(k) * n, n);
        single_source_dependency(graph, static_cast<NodeId>(first + static_cast<std::size_t>(k)), ws, row);
      }
    }
    for (std::int64_t k = 0; k < count; ++k) {
      const double* row = deltas.data() + static_cast<std::size_t>(k) * n;
      for (std::size_t v = 0; v < n; ++v) totals[v] += row[v];
    }
  }
  finish_pair_once(totals);
  return totals;
}

QuartileThresholds quartiles(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("quartiles of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto at = [&](double p) {
    const double position = static_cast<double>(sorted.size() - 1) * p;
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const double fraction = position - static_cast<double>(lower);
    if (lower + 1 >= sorted.size() || fraction == 0.0) return sorted[lower];
    return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

std::string_view to_string(Band band) {
  switch (band) {
    case Band::loose: return "loose";
    case Band::mid: return "mid";
    case Band::tight: return "tight";
  }
  return "mid";
}

Band classify_band(double value, const QuartileThresholds& thresholds) {
  if (value > thresholds.q3) return Band::tight;
  if (value < thresholds.q1) return Band::loose;
  return Band::mid;
}

std::vector<CentralityRecord> compute_centrality(const DependencyGraph& graph) {
  std::vector<CentralityRecord> records;
  if (graph.node_count() == 0) return records;

  const auto degree = degree_centrality(graph);
  const auto betweenness = betweenness_centrality(graph);
  const std::vector<double> degree_values(degree.begin(), degree.end());
  const auto degree_q = quartiles(degree_values);
  const auto betweenness_q = quartiles(betweenness);

  records.reserve(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    records.push_back({graph.name(v), degree[v], betweenness[v], classify_band(degree_values[v], degree_q),
                       classify_band(betweenness[v], betweenness_q)});
  }
  return records;
}

}  // namespace dyncoup
