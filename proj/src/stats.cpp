#include "dyncoup/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dyncoup {

namespace {

constexpr double kContinuityCorrection = 0.5;
// Rank sums are multiples of 0.5; anything closer than this is the same U.
constexpr double kUTolerance = 1e-9;

void require_both_groups(const GroupedSample& sample) {
  if (sample.tested_values.empty() || sample.untested_values.empty()) {
    throw std::invalid_argument("degenerate grouping");
  }
}

std::vector<double> pooled(const GroupedSample& sample) {
  std::vector<double> values = sample.tested_values;
  values.insert(values.end(), sample.untested_values.begin(), sample.untested_values.end());
  return values;
}

/// Σ(t³ − t) over groups of tied values.
double tie_term(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const auto t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

}  // namespace

std::string_view to_string(EffectSize effect) {
  switch (effect) {
    case EffectSize::small: return "small";
    case EffectSize::medium: return "medium";
    case EffectSize::large: return "large";
  }
  return "small";
}

std::vector<double> rank_with_ties(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i+1 .. j share their mean
    const double average = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = average;
    i = j;
  }
  return ranks;
}

StatResult mann_whitney_u(const GroupedSample& sample) {
  require_both_groups(sample);
  const auto values = pooled(sample);
  const auto ranks = rank_with_ties(values);

  StatResult r;
  r.n_tested = sample.tested_values.size();
  r.n_untested = sample.untested_values.size();
  r.n = values.size();
  const auto n1 = static_cast<double>(r.n_tested);
  const auto n2 = static_cast<double>(r.n_untested);
  const auto n = static_cast<double>(r.n);

  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(r.n_tested), 0.0);
  r.u1 = rank_sum - n1 * (n1 + 1.0) / 2.0;
  r.u2 = n1 * n2 - r.u1;
  r.u = std::min(r.u1, r.u2);

  const double mean = n1 * n2 / 2.0;
  const double variance = (n1 * n2 / 12.0) * ((n + 1.0) - tie_term(values) / (n * (n - 1.0)));
  const double deviation = r.u1 - mean;
  if (variance > 0.0) {
    const double corrected = std::max(0.0, std::abs(deviation) - kContinuityCorrection);
    r.z = std::copysign(corrected / std::sqrt(variance), deviation);
    if (corrected == 0.0) r.z = 0.0;
  }
  r.p_two_tailed = std::clamp(std::erfc(std::abs(r.z) / std::sqrt(2.0)), 0.0, 1.0);
  r.ez = std::abs(r.z) / std::sqrt(n);
  r.cohen = cohen_classify(r.ez);
  return r;
}

EffectSize cohen_classify(double ez) {
  if (ez >= 0.5) return EffectSize::large;
  if (ez >= 0.3) return EffectSize::medium;
  return EffectSize::small;
}

double exact_mann_whitney_p(const GroupedSample& sample) {
  require_both_groups(sample);
  const auto values = pooled(sample);
  if (values.size() > kExactEnumerationCap) {
    throw std::invalid_argument("exact Mann-Whitney enumeration is capped at 16 observations");
  }
  const auto ranks = rank_with_ties(values);
  const std::size_t n1 = sample.tested_values.size();
  const double offset = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
  const double mean = static_cast<double>(n1) * static_cast<double>(sample.untested_values.size()) / 2.0;

  const double observed =
      std::abs(std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0) - offset - mean);

  // membership mask, starting from the lexicographically largest arrangement
  std::vector<bool> in_tested(values.size(), false);
  std::fill(in_tested.begin(), in_tested.begin() + static_cast<std::ptrdiff_t>(n1), true);
  std::size_t extreme = 0;
  std::size_t total = 0;
  do {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (in_tested[i]) rank_sum += ranks[i];
    }
    if (std::abs(rank_sum - offset - mean) >= observed - kUTolerance) ++extreme;
    ++total;
  } while (std::prev_permutation(in_tested.begin(), in_tested.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace dyncoup
