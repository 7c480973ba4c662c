#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dyncoup {

/// Centrality values split by whether the class has a dedicated unit test.
struct GroupedSample {
  std::vector<double> tested_values;
  std::vector<double> untested_values;
};

enum class EffectSize { small, medium, large };
std::string_view to_string(EffectSize effect);

struct StatResult {
  double u = 0.0;   ///< min(U1, U2)
  double u1 = 0.0;  ///< tested-group U
  double u2 = 0.0;
  double z = 0.0;  ///< positive when the tested group ranks higher
  double p_two_tailed = 1.0;
  double ez = 0.0;  ///< |z| / sqrt(n)
  EffectSize cohen = EffectSize::small;
  std::size_t n = 0;
  std::size_t n_tested = 0;
  std::size_t n_untested = 0;
};

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> rank_with_ties(std::span<const double> values);

/// Two-tailed Mann-Whitney U test via the normal approximation with
/// tie-corrected variance and a 0.5 continuity correction. Throws
/// std::invalid_argument("degenerate grouping") when either group is empty.
StatResult mann_whitney_u(const GroupedSample& sample);

/// small < 0.3 <= medium < 0.5 <= large.
EffectSize cohen_classify(double ez);

inline constexpr std::size_t kExactEnumerationCap = 16;

/// Exact two-tailed p by enumerating every assignment of the pooled ranks to
/// the tested group. Combined size is capped at kExactEnumerationCap.
double exact_mann_whitney_p(const GroupedSample& sample);

}  // namespace dyncoup
