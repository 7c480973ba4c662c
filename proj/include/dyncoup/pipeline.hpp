#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyncoup/coupling_graph.hpp"
#include "dyncoup/ingest.hpp"
#include "dyncoup/report.hpp"
#include "dyncoup/synth.hpp"
#include "dyncoup/test_mapping.hpp"

namespace dyncoup {

enum class GraphFormat { dot, graphml };
GraphFormat parse_graph_format(std::string_view text);

struct AnalysisInputs {
  std::vector<CallRecord> records;
  TestManifest manifest;
  ProjectMeta meta;
};

struct AnalysisOptions {
  ScopeFilter scope;
  NamingConvention convention = NamingConvention::suffix;
  double alpha = 0.05;
  /// Known classes to show even if never observed in the trace.
  std::vector<std::string> extra_nodes;
};

/// Reads the trace (format by extension), and the optional manifest and
/// metadata files. Missing or unreadable files raise InputError naming the path.
AnalysisInputs load_inputs(const std::filesystem::path& trace_path,
                           const std::optional<std::filesystem::path>& tests_path,
                           const std::optional<std::filesystem::path>& meta_path);

/// scope filter -> aggregate -> graph -> centrality -> test links -> stats.
AnalysisBundle analyze(const AnalysisInputs& inputs, const AnalysisOptions& options);

/// Node symbols and sizes for the exports.
AnnotationMap annotate(const AnalysisBundle& bundle);

std::vector<std::filesystem::path> write_graph(const AnalysisBundle& bundle, GraphFormat format,
                                               const std::filesystem::path& directory);

/// Creates `directory` if needed; InputError when it cannot be created or is
/// not a directory.
void prepare_output_directory(const std::filesystem::path& directory);

struct RunConfig {
  std::filesystem::path trace_path;
  std::optional<std::filesystem::path> tests_path;
  std::optional<std::filesystem::path> meta_path;
  AnalysisOptions options;
  std::filesystem::path out_dir = "dyncoup-out";
  std::vector<ReportFormat> reports{ReportFormat::markdown, ReportFormat::csv, ReportFormat::json};
  std::vector<GraphFormat> graphs{GraphFormat::dot, GraphFormat::graphml};
};

struct RunOutput {
  AnalysisBundle bundle;
  std::vector<std::filesystem::path> files;
};

/// The whole analyze command minus argument parsing.
RunOutput run_analysis(const RunConfig& config);

inline constexpr std::string_view kSynthTraceFile = "trace.jsonl";
inline constexpr std::string_view kSynthManifestFile = "tests.json";

/// Writes trace.jsonl and tests.json for `config` into `directory`.
std::vector<std::filesystem::path> run_synth(const SynthConfig& config, const std::filesystem::path& directory);

}  // namespace dyncoup
