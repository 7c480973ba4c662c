#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dyncoup/coupling_graph.hpp"

namespace dyncoup {

/// Incident edge count per node, indexed by NodeId.
std::vector<std::size_t> degree_centrality(const DependencyGraph& graph);

/// Unnormalized shortest-path betweenness on the unweighted undirected graph,
/// indexed by NodeId. Each unordered pair {s,t} is counted once, endpoints
/// excluded, with fractional credit when several shortest paths exist.
///
/// Single-source passes run in parallel (OpenMP); their contributions are
/// added in ascending source order, so the result is bit-identical to
/// betweenness_centrality_serial for any thread count.
std::vector<double> betweenness_centrality(const DependencyGraph& graph);

/// Reference implementation: the same Brandes passes run one after another.
std::vector<double> betweenness_centrality_serial(const DependencyGraph& graph);

struct QuartileThresholds {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

/// Linear interpolation at fractional index (n-1)p of the sorted values.
/// Throws std::invalid_argument on empty input.
QuartileThresholds quartiles(std::span<const double> values);

/// Ordered loose < mid < tight.
enum class Band { loose = 0, mid = 1, tight = 2 };

std::string_view to_string(Band band);

/// tight iff value > q3, loose iff value < q1 (both strict).
Band classify_band(double value, const QuartileThresholds& thresholds);

struct CentralityRecord {
  std::string cls;
  std::size_t degree = 0;
  double betweenness = 0.0;
  Band degree_band = Band::mid;
  Band betweenness_band = Band::mid;
};

/// One record per node in node order, bands taken against the graph's own
/// quartiles for each metric. Empty graph -> empty list.
std::vector<CentralityRecord> compute_centrality(const DependencyGraph& graph);

}  // namespace dyncoup
