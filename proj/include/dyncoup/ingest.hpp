#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dyncoup/error.hpp"

namespace dyncoup {

/// One aggregated directed invocation fact: `count` calls from a method of
/// `caller` into a method of `callee`.
struct CallRecord {
  std::string caller;
  std::string callee;
  std::optional<std::string> caller_method;
  std::optional<std::string> callee_method;
  std::uint64_t count = 1;

  bool operator==(const CallRecord&) const = default;
};

/// Plain string-prefix scope test on fully-qualified class names.
/// An empty include list admits every class.
struct ScopeFilter {
  std::vector<std::string> include_prefixes;
  std::vector<std::string> exclude_prefixes;

  [[nodiscard]] bool in_scope(std::string_view cls) const;
};

using ClassPair = std::pair<std::string, std::string>;

/// Directed (caller, callee) -> total invocation count. Never holds a
/// self-call or a zero count.
class InvocationTable {
 public:
  using Entries = std::map<ClassPair, std::uint64_t>;

  /// Adds `count` calls caller -> callee. Throws std::invalid_argument on a
  /// self-call or a zero count.
  void add(const std::string& caller, const std::string& callee, std::uint64_t count);

  [[nodiscard]] const Entries& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  /// 0 when the pair was never observed.
  [[nodiscard]] std::uint64_t count(const std::string& caller, const std::string& callee) const;
  [[nodiscard]] InvocationTable transposed() const;

  bool operator==(const InvocationTable&) const = default;

 private:
  Entries entries_;
};

enum class TraceFormat { jsonl, csv };

/// Picks csv for a `.csv` extension, jsonl otherwise.
TraceFormat trace_format_for_path(std::string_view path);

/// Reads a trace stream. Blank lines are skipped; malformed rows raise
/// InputError naming the 1-based line and the offending field.
std::vector<CallRecord> parse_trace(std::istream& in, TraceFormat format);

/// Writes one row per table entry in the given format (entries in key order).
void write_trace(std::ostream& out, const InvocationTable& table, TraceFormat format);

std::vector<CallRecord> filter_scope(std::span<const CallRecord> records, const ScopeFilter& filter);

/// Sums counts per (caller, callee); self-calls are dropped here rather than
/// at parse time.
InvocationTable aggregate(std::span<const CallRecord> records);

/// Project size/coverage metadata. Measured by external tools; only ingested.
struct ProjectMeta {
  std::string name;
  double kloc = 0.0;
  std::optional<double> test_kloc;
  std::optional<std::uint64_t> noc;
  std::optional<double> statement_coverage;
  std::optional<double> class_coverage;
};

/// `key: value` per line, `#` starts a comment.
ProjectMeta parse_meta(std::istream& in);

enum class SizeBand { tiny, small, medium, large, extra_large };

/// Half-open KLOC bands [0,1) [1,10) [10,100) [100,1000) [1000,inf).
SizeBand size_band(double kloc);
std::string_view to_string(SizeBand band);

}  // namespace dyncoup
