#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dyncoup/ingest.hpp"
#include "dyncoup/test_mapping.hpp"

namespace dyncoup {

enum class Topology { uniform_random, preferential_attachment };
enum class TestPolicy { random, coupling_biased, anti_coupling_biased };

Topology parse_topology(std::string_view text);
TestPolicy parse_test_policy(std::string_view text);

/// Synthetic system description. Everything downstream is a pure function of
/// this struct, seed included.
struct SynthConfig {
  std::size_t n_classes = 100;
  Topology topology = Topology::preferential_attachment;
  double edge_prob = 0.05;      ///< uniform-random only, in (0, 1]
  std::size_t attachment = 2;   ///< preferential-attachment edges per new class, >= 1
  std::uint64_t calls_min = 1;  ///< per directed entry, inclusive
  std::uint64_t calls_max = 10;
  TestPolicy policy = TestPolicy::random;
  double coverage_fraction = 0.4;
  std::uint64_t seed = 1;

  /// Throws InputError describing the first invalid field.
  void validate() const;
};

/// "C0001".."Cnnnn", zero-padded to at least four digits. `index` is 0-based.
std::string synth_class_name(std::size_t index, std::size_t n_classes);

/// Directed invocation table over the synthetic classes. Each undirected
/// topology edge becomes one or two directed entries.
InvocationTable generate_system(const SynthConfig& config);

/// Picks floor(coverage * n) classes and gives each a `<Class>Test` that
/// invokes only that class.
TestManifest assign_tests(const InvocationTable& table, const SynthConfig& config);

}  // namespace dyncoup
