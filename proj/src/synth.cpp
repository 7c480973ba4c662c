#include "dyncoup/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "dyncoup/stats.hpp"

namespace dyncoup {

namespace {

// Independent random streams derived from one seed.
enum class Stream : std::uint32_t { topology = 1, tests = 2 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

EdgeSet uniform_topology(const SynthConfig& config, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(config.edge_prob);
  EdgeSet edges;
  for (std::size_t i = 0; i < config.n_classes; ++i) {
    for (std::size_t j = i + 1; j < config.n_classes; ++j) {
      if (coin(rng)) edges.emplace(i, j);
    }
  }
  return edges;
}

/// Barabási-Albert growth from a complete seed graph on m+1 classes.
EdgeSet preferential_topology(const SynthConfig& config, std::mt19937_64& rng) {
  const std::size_t n = config.n_classes;
  const std::size_t m = config.attachment;
  const std::size_t seed_size = std::min(n, m + 1);
  EdgeSet edges;
  // every endpoint occurrence, so a uniform pick is degree-proportional
  std::vector<std::size_t> endpoints;
  for (std::size_t i = 0; i < seed_size; ++i) {
    for (std::size_t j = i + 1; j < seed_size; ++j) {
      edges.emplace(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  for (std::size_t v = seed_size; v < n; ++v) {
    std::set<std::size_t> targets;
    while (targets.size() < m) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      targets.insert(endpoints[pick(rng)]);
    }
    for (std::size_t t : targets) {
      edges.emplace(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

}  // namespace

Topology parse_topology(std::string_view text) {
  if (text == "uniform" || text == "uniform-random") return Topology::uniform_random;
  if (text == "preferential" || text == "preferential-attachment") return Topology::preferential_attachment;
  throw InputError(fmt::format("unknown topology '{}'", text));
}

TestPolicy parse_test_policy(std::string_view text) {
  if (text == "random") return TestPolicy::random;
  if (text == "coupling" || text == "coupling-biased") return TestPolicy::coupling_biased;
  if (text == "anti-coupling" || text == "anti-coupling-biased") return TestPolicy::anti_coupling_biased;
  throw InputError(fmt::format("unknown test policy '{}'", text));
}

void SynthConfig::validate() const {
  if (n_classes == 0) throw InputError("synth: n_classes must be positive");
  if (topology == Topology::uniform_random && !(edge_prob > 0.0 && edge_prob <= 1.0)) {
    throw InputError("synth: edge_prob must lie in (0, 1]");
  }
  if (topology == Topology::preferential_attachment && attachment == 0) {
    throw InputError("synth: attachment m must be at least 1");
  }
  if (calls_min == 0 || calls_min > calls_max) throw InputError("synth: call count range must satisfy 1 <= min <= max");
  if (!(coverage_fraction >= 0.0 && coverage_fraction <= 1.0)) {
    throw InputError("synth: coverage_fraction must lie in [0, 1]");
  }
}

std::string synth_class_name(std::size_t index, std::size_t n_classes) {
  const auto width = std::max<std::size_t>(4, fmt::formatted_size("{}", n_classes));
  return fmt::format("C{:0{}}", index + 1, width);
}

InvocationTable generate_system(const SynthConfig& config) {
  config.validate();
  auto rng = make_rng(config.seed, Stream::topology);
  const auto edges = config.topology == Topology::uniform_random ? uniform_topology(config, rng)
                                                                  : preferential_topology(config, rng);

  std::uniform_int_distribution<int> direction(0, 2);
  std::uniform_int_distribution<std::uint64_t> calls(config.calls_min, config.calls_max);
  InvocationTable table;
  for (const auto& [i, j] : edges) {
    const auto a = synth_class_name(i, config.n_classes);
    const auto b = synth_class_name(j, config.n_classes);
    switch (direction(rng)) {
      case 0:
        table.add(a, b, calls(rng));
        break;
      case 1:
        table.add(b, a, calls(rng));
        break;
      default:
        table.add(a, b, calls(rng));
        table.add(b, a, calls(rng));
    }
  }
  return table;
}

TestManifest assign_tests(const InvocationTable& table, const SynthConfig& config) {
  config.validate();
  const std::size_t n = config.n_classes;
  // guards against e.g. 0.29 * 100 == 28.999...
  const auto k = std::min(n, static_cast<std::size_t>(std::floor(config.coverage_fraction * static_cast<double>(n) + 1e-9)));

  std::map<std::string, std::set<std::string>> partners;
  for (const auto& [pair, count] : table.entries()) {
    partners[pair.first].insert(pair.second);
    partners[pair.second].insert(pair.first);
  }
  std::vector<std::string> names(n);
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    names[i] = synth_class_name(i, n);
    if (auto it = partners.find(names[i]); it != partners.end()) degree[i] = static_cast<double>(it->second.size());
  }
  const auto ranks = rank_with_ties(degree);

  // Weighted sampling without replacement: keep the k largest log(u)/w.
  auto rng = make_rng(config.seed, Stream::tests);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    double weight = 1.0;
    if (config.policy == TestPolicy::coupling_biased) weight = ranks[i];
    if (config.policy == TestPolicy::anti_coupling_biased) weight = 1.0 / ranks[i];
    const double u = std::max(unit(rng), std::numeric_limits<double>::min());
    keys[i] = std::log(u) / weight;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());

  std::uniform_int_distribution<std::uint64_t> cases(1, 20);
  TestManifest manifest;
  for (std::size_t i : order) {
    manifest.test_classes.push_back({names[i] + "Test", cases(rng), {names[i]}});
  }
  return manifest;
}

}  // namespace dyncoup
