#include "dyncoup/coupling_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace dyncoup {

DependencyGraph::DependencyGraph(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (std::adjacent_find(nodes_.begin(), nodes_.end(), std::greater_equal<>{}) != nodes_.end()) {
    throw std::invalid_argument("graph nodes must be sorted and unique");
  }
  const auto n = nodes_.size();
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.a >= e.b || e.b >= n) throw std::invalid_argument("graph edge must satisfy a < b < node_count");
    if (i > 0) {
      const auto& prev = edges_[i - 1];
      if (std::pair(prev.a, prev.b) >= std::pair(e.a, e.b)) {
        throw std::invalid_argument("graph edges must be sorted and unique");
      }
    }
    ++degree[e.a];
    ++degree[e.b];
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  targets_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    targets_[cursor[e.a]++] = e.b;
    targets_[cursor[e.b]++] = e.a;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

std::optional<NodeId> DependencyGraph::find(std::string_view name) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end() || *it != name) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.begin());
}

DependencyGraph build_graph(const InvocationTable& table, std::span<const std::string> extra_nodes) {
  std::set<std::string, std::less<>> names(extra_nodes.begin(), extra_nodes.end());
  for (const auto& [pair, count] : table.entries()) {
    names.insert(pair.first);
    names.insert(pair.second);
  }
  std::vector<std::string> nodes(names.begin(), names.end());
  auto index = [&](const std::string& name) {
    return static_cast<NodeId>(std::lower_bound(nodes.begin(), nodes.end(), name) - nodes.begin());
  };

  std::map<std::pair<NodeId, NodeId>, std::uint64_t> merged;
  for (const auto& [pair, count] : table.entries()) {
    auto u = index(pair.first);
    auto v = index(pair.second);
    merged[{std::min(u, v), std::max(u, v)}] += count;
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, weight] : merged) edges.push_back({key.first, key.second, weight});
  return DependencyGraph(std::move(nodes), std::move(edges));
}

std::size_t dcbo(const InvocationTable& table, const std::string& cls) {
  const auto& entries = table.entries();
  std::size_t callees = 0;
  for (auto it = entries.lower_bound({cls, std::string{}}); it != entries.end() && it->first.first == cls; ++it) {
    ++callees;
  }
  return callees;
}

std::string_view to_string(NodeSymbol symbol) {
  switch (symbol) {
    case NodeSymbol::tight_tested: return "tight_tested";
    case NodeSymbol::tight_untested: return "tight_untested";
    case NodeSymbol::loose_tested: return "loose_tested";
    case NodeSymbol::untested: return "untested";
  }
  return "untested";
}

NodeSymbol parse_node_symbol(std::string_view text) {
  for (auto symbol : {NodeSymbol::tight_tested, NodeSymbol::tight_untested, NodeSymbol::loose_tested,
                      NodeSymbol::untested}) {
    if (to_string(symbol) == text) return symbol;
  }
  throw InputError(fmt::format("unknown node symbol '{}'", text));
}

NodeSymbol node_symbol(bool tight, bool tested) {
  if (tight) return tested ? NodeSymbol::tight_tested : NodeSymbol::tight_untested;
  return tested ? NodeSymbol::loose_tested : NodeSymbol::untested;
}

double vertex_size(bool tight, std::size_t degree) {
  if (!tight || degree == 0) return 1.0;
  return 1.0 + std::log(static_cast<double>(degree));
}

namespace {

const NodeAnnotation& annotation_for(const AnnotationMap& annotations, const std::string& node) {
  auto it = annotations.find(node);
  if (it == annotations.end()) throw InputError("missing annotation for node " + node);
  return it->second;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view dot_shape(NodeSymbol symbol) {
  switch (symbol) {
    case NodeSymbol::tight_tested: return "shape=square, style=filled";
    case NodeSymbol::tight_untested: return "shape=triangle, style=filled";
    case NodeSymbol::loose_tested: return "shape=diamond";
    case NodeSymbol::untested: return "shape=circle";
  }
  return "shape=circle";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool replaced = false;
    if (s[i] == '&') {
      for (const auto& [entity, c] : kEntities) {
        if (s.substr(i).starts_with(entity)) {
          out.push_back(c);
          i += entity.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(s[i++]);
  }
  return out;
}

}  // namespace

std::string export_dot(const DependencyGraph& graph, const AnnotationMap& annotations) {
  std::string out = "graph dependencies {\n";
  for (const auto& node : graph.nodes()) {
    const auto& ann = annotation_for(annotations, node);
    out += fmt::format("  {} [{}, width={:.3f}, height={:.3f}];\n", dot_quote(node), dot_shape(ann.symbol),
                       ann.size, ann.size);
  }
  for (const auto& e : graph.edges()) {
    out += fmt::format("  {} -- {} [weight={}];\n", dot_quote(graph.name(e.a)), dot_quote(graph.name(e.b)),
                       e.weight);
  }
  out += "}\n";
  return out;
}

std::string export_graphml(const DependencyGraph& graph, const AnnotationMap& annotations) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"symbol\" for=\"node\" attr.name=\"symbol\" attr.type=\"string\"/>\n"
      "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n"
      "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n"
      "  <key id=\"tested\" for=\"node\" attr.name=\"tested\" attr.type=\"boolean\"/>\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      "  <graph id=\"dependencies\" edgedefault=\"undirected\">\n";
  for (const auto& node : graph.nodes()) {
    const auto& ann = annotation_for(annotations, node);
    out += fmt::format("    <node id=\"{}\">\n", xml_escape(node));
    out += fmt::format("      <data key=\"symbol\">{}</data>\n", to_string(ann.symbol));
    out += fmt::format("      <data key=\"degree\">{}</data>\n", ann.degree);
    out += fmt::format("      <data key=\"betweenness\">{}</data>\n", ann.betweenness);
    out += fmt::format("      <data key=\"tested\">{}</data>\n", ann.tested ? "true" : "false");
    out += "    </node>\n";
  }
  for (const auto& e : graph.edges()) {
    out += fmt::format("    <edge source=\"{}\" target=\"{}\">\n", xml_escape(graph.name(e.a)),
                       xml_escape(graph.name(e.b)));
    out += fmt::format("      <data key=\"weight\">{}</data>\n", e.weight);
    out += "    </edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

namespace {

struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attributes;
  bool closing = false;
  bool self_closing = false;
};

XmlTag parse_tag(std::string_view body) {
  XmlTag tag;
  if (body.starts_with('/')) {
    tag.closing = true;
    body.remove_prefix(1);
  }
  if (body.ends_with('/')) {
    tag.self_closing = true;
    body.remove_suffix(1);
  }
  auto name_end = body.find_first_of(" \t\r\n");
  tag.name = std::string(body.substr(0, name_end));
  std::size_t pos = name_end == std::string_view::npos ? body.size() : name_end;
  while (pos < body.size()) {
    auto eq = body.find('=', pos);
    if (eq == std::string_view::npos) break;
    auto key_begin = body.find_first_not_of(" \t\r\n", pos);
    auto key = body.substr(key_begin, eq - key_begin);
    auto open = body.find('"', eq);
    auto close = body.find('"', open + 1);
    if (open == std::string_view::npos || close == std::string_view::npos) {
      throw InputError("malformed GraphML attribute");
    }
    tag.attributes[std::string(key)] = xml_unescape(body.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  return tag;
}

template <typename T>
T parse_number(std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("malformed GraphML number '{}'", text));
  }
  return value;
}

}  // namespace

GraphmlDocument parse_graphml(std::string_view text) {
  std::vector<std::string> names;
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> raw_edges;
  AnnotationMap annotations;

  enum class Scope { none, node, edge } scope = Scope::none;
  std::string current_node;
  std::string data_key;

  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string_view::npos) {
    auto end = text.find('>', pos);
    if (end == std::string_view::npos) throw InputError("unterminated GraphML tag");
    auto body = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (body.starts_with('?') || body.starts_with('!')) continue;
    auto tag = parse_tag(body);

    if (tag.closing) {
      if (tag.name == "node" || tag.name == "edge") scope = Scope::none;
      continue;
    }
    if (tag.name == "node") {
      current_node = tag.attributes.at("id");
      names.push_back(current_node);
      annotations[current_node] = NodeAnnotation{};
      scope = tag.self_closing ? Scope::none : Scope::node;
    } else if (tag.name == "edge") {
      raw_edges.emplace_back(tag.attributes.at("source"), tag.attributes.at("target"), 0);
      scope = tag.self_closing ? Scope::none : Scope::edge;
    } else if (tag.name == "data" && !tag.self_closing) {
      auto close = text.find("</data>", pos);
      if (close == std::string_view::npos) throw InputError("unterminated GraphML data element");
      auto value = xml_unescape(text.substr(pos, close - pos));
      pos = close + 7;
      const auto& key = tag.attributes.at("key");
      if (scope == Scope::edge && key == "weight") {
        std::get<2>(raw_edges.back()) = parse_number<std::uint64_t>(value);
      } else if (scope == Scope::node) {
        auto& ann = annotations[current_node];
        if (key == "symbol") ann.symbol = parse_node_symbol(value);
        else if (key == "degree") ann.degree = parse_number<std::size_t>(value);
        else if (key == "betweenness") ann.betweenness = parse_number<double>(value);
        else if (key == "tested") ann.tested = value == "true";
      }
    }
  }

  std::sort(names.begin(), names.end());
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [source, target, weight] : raw_edges) {
    auto lookup = [&](const std::string& name) {
      auto it = std::lower_bound(names.begin(), names.end(), name);
      if (it == names.end() || *it != name) throw InputError("GraphML edge references unknown node " + name);
      return static_cast<NodeId>(it - names.begin());
    };
    auto u = lookup(source);
    auto v = lookup(target);
    edges.push_back({std::min(u, v), std::max(u, v), weight});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  for (auto& [name, ann] : annotations) {
    bool tight = ann.symbol == NodeSymbol::tight_tested || ann.symbol == NodeSymbol::tight_untested;
    ann.size = vertex_size(tight, ann.degree);
  }
  return {DependencyGraph(std::move(names), std::move(edges)), std::move(annotations)};
}

}  // namespace dyncoup
