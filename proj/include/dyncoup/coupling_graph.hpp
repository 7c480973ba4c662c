#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dyncoup/ingest.hpp"

namespace dyncoup {

using NodeId = std::uint32_t;

/// Undirected coupling edge between node indices `a < b`. `weight` is the
/// total number of invocations in both directions.
struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  std::uint64_t weight = 0;

  bool operator==(const Edge&) const = default;
};

/// Undirected class-coupling graph. Nodes are kept in lexicographic order and
/// identified by their index in that order; edges are sorted by (a, b).
/// Immutable once built, so concurrent reads need no coordination.
class DependencyGraph {
 public:
  DependencyGraph() = default;

  /// `nodes` must be sorted and unique; every edge must satisfy a < b and the
  /// edge list must be sorted by (a, b) without duplicates.
  DependencyGraph(std::vector<std::string> nodes, std::vector<Edge> edges);

  [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const std::string> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
  [[nodiscard]] const std::string& name(NodeId id) const { return nodes_.at(id); }

  /// Adjacent node ids in ascending order.
  [[nodiscard]] std::span<const NodeId> neighbors(NodeId id) const {
    return {targets_.data() + offsets_[id], targets_.data() + offsets_[id + 1]};
  }
  [[nodiscard]] std::size_t degree(NodeId id) const { return offsets_[id + 1] - offsets_[id]; }

  [[nodiscard]] std::optional<NodeId> find(std::string_view name) const;

  bool operator==(const DependencyGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  // CSR adjacency
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// Collapses directed invocations into undirected coupling edges. Nodes are
/// all endpoints plus `extra_nodes` (classes known but never observed).
DependencyGraph build_graph(const InvocationTable& table, std::span<const std::string> extra_nodes = {});

/// Dynamic Coupling Between Objects: number of distinct classes `cls` invokes.
std::size_t dcbo(const InvocationTable& table, const std::string& cls);

/// Node legend: tight classes are drawn by test status, others only show
/// whether they have a dedicated test.
enum class NodeSymbol { tight_tested, tight_untested, loose_tested, untested };

std::string_view to_string(NodeSymbol symbol);
NodeSymbol parse_node_symbol(std::string_view text);
NodeSymbol node_symbol(bool tight, bool tested);

/// 1 + ln(degree) for tight classes, 1 otherwise.
double vertex_size(bool tight, std::size_t degree);

struct NodeAnnotation {
  NodeSymbol symbol = NodeSymbol::untested;
  double size = 1.0;
  std::size_t degree = 0;
  double betweenness = 0.0;
  bool tested = false;

  bool operator==(const NodeAnnotation&) const = default;
};

using AnnotationMap = std::map<std::string, NodeAnnotation, std::less<>>;

/// Undirected DOT text. Byte-identical for identical inputs. Throws
/// InputError naming the first node without an annotation.
std::string export_dot(const DependencyGraph& graph, const AnnotationMap& annotations);

/// GraphML with node keys symbol/degree/betweenness/tested and edge key weight.
std::string export_graphml(const DependencyGraph& graph, const AnnotationMap& annotations);

struct GraphmlDocument {
  DependencyGraph graph;
  AnnotationMap annotations;
};

/// Reads back the GraphML dialect written by export_graphml. Not a general
/// GraphML reader.
GraphmlDocument parse_graphml(std::string_view text);

}  // namespace dyncoup
