#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dyncoup/centrality.hpp"
#include "dyncoup/coupling_graph.hpp"
#include "dyncoup/ingest.hpp"
#include "dyncoup/stats.hpp"
#include "dyncoup/test_mapping.hpp"

namespace dyncoup {

inline constexpr std::string_view kToolName = "dyncoup";
inline constexpr std::string_view kToolVersion = DYNCOUP_VERSION;

inline constexpr std::string_view kDegreeMetric = "degree";
inline constexpr std::string_view kBetweennessMetric = "betweenness";

/// Everything one analysis run produces.
struct AnalysisBundle {
  DependencyGraph graph;
  std::vector<CentralityRecord> centrality;  ///< node order
  TestLinkSet links;
  /// Keyed by kDegreeMetric / kBetweennessMetric; a metric is absent when one
  /// of the tested/untested groups is empty.
  std::map<std::string, StatResult, std::less<>> stats;
  ProjectMeta meta;
  std::map<std::string, std::size_t, std::less<>> dcbo;
  std::uint64_t ntc = 0;
  std::size_t test_class_count = 0;
  double alpha = 0.05;
  std::vector<std::string> warnings;
};

struct ClassRow {
  std::string cls;
  std::size_t degree = 0;
  double betweenness = 0.0;
  bool tested = false;
};

/// Sorted by degree desc, betweenness desc, then class name.
std::vector<ClassRow> per_class_table(const AnalysisBundle& bundle);

struct BandCounts {
  std::size_t tight_total = 0;
  std::size_t tight_tested = 0;
  std::size_t loose_total = 0;
  std::size_t loose_tested = 0;

  /// tested / total, 0 for an empty band.
  [[nodiscard]] double tight_proportion() const;
  [[nodiscard]] double loose_proportion() const;
};

struct QuartileSummary {
  BandCounts degree;
  BandCounts betweenness;
};

QuartileSummary quartile_summary(const AnalysisBundle& bundle);

/// Proportion as a whole percent, rounded half away from zero.
long rounded_percent(double proportion);

struct StatsRow {
  std::string metric;
  StatResult result;
  bool significant = false;
};

/// Betweenness row first, then degree, matching the usual table layout.
std::vector<StatsRow> stats_summary(const AnalysisBundle& bundle);

enum class ReportFormat { markdown, csv, json };
ReportFormat parse_report_format(std::string_view text);

std::string render_markdown(const AnalysisBundle& bundle);
/// file name -> contents for the three CSV tables.
std::map<std::string, std::string> render_csv(const AnalysisBundle& bundle);
std::string render_json(const AnalysisBundle& bundle);

/// Writes the report files for `format` into `directory` and returns their
/// paths. I/O failures raise InputError carrying the path.
std::vector<std::filesystem::path> emit(const AnalysisBundle& bundle, ReportFormat format,
                                        const std::filesystem::path& directory);

/// Writes `contents` to `path` verbatim.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dyncoup
