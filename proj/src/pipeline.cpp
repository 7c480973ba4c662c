#include "dyncoup/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "dyncoup/centrality.hpp"
#include "dyncoup/stats.hpp"

namespace dyncoup {

namespace {

std::ifstream open_input(const std::filesystem::path& path, std::string_view what) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw InputError(fmt::format("{} not found: {}", what, path.string()));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read {}: {}", what, path.string()));
  return in;
}

template <typename Parse>
auto parse_file(const std::filesystem::path& path, std::string_view what, Parse parse) {
  auto in = open_input(path, what);
  try {
    return parse(in);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

GraphFormat parse_graph_format(std::string_view text) {
  if (text == "dot") return GraphFormat::dot;
  if (text == "graphml") return GraphFormat::graphml;
  throw InputError(fmt::format("unknown graph format '{}'", text));
}

AnalysisInputs load_inputs(const std::filesystem::path& trace_path,
                           const std::optional<std::filesystem::path>& tests_path,
                           const std::optional<std::filesystem::path>& meta_path) {
  AnalysisInputs inputs;
  const auto format = trace_format_for_path(trace_path.string());
  inputs.records = parse_file(trace_path, "trace file", [&](std::istream& in) { return parse_trace(in, format); });
  if (tests_path) inputs.manifest = parse_file(*tests_path, "test manifest", [](std::istream& in) { return parse_manifest(in); });
  if (meta_path) inputs.meta = parse_file(*meta_path, "metadata file", [](std::istream& in) { return parse_meta(in); });
  return inputs;
}

AnalysisBundle analyze(const AnalysisInputs& inputs, const AnalysisOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  inputs.manifest.validate();

  AnalysisBundle bundle;
  bundle.meta = inputs.meta;
  bundle.alpha = options.alpha;
  bundle.ntc = count_ntc(inputs.manifest);
  bundle.test_class_count = inputs.manifest.test_classes.size();

  const auto in_scope = filter_scope(inputs.records, options.scope);
  const auto table = aggregate(in_scope);
  bundle.graph = build_graph(table, options.extra_nodes);
  bundle.centrality = compute_centrality(bundle.graph);
  for (const auto& node : bundle.graph.nodes()) bundle.dcbo[node] = dcbo(table, node);

  const std::vector<std::string> production(bundle.graph.nodes().begin(), bundle.graph.nodes().end());
  auto by_name = match_by_name(inputs.manifest.names(), production, options.convention);
  const auto by_calls = match_by_calls(inputs.manifest, production);
  bundle.links = merge_links(by_name.links, by_calls);

  bundle.warnings = std::move(by_name.warnings);
  for (const auto& test : by_name.unmatched) {
    bundle.warnings.push_back(fmt::format("test {} matches no production class by naming convention", test));
  }

  GroupedSample degree_sample;
  GroupedSample betweenness_sample;
  for (const auto& record : bundle.centrality) {
    const bool tested = bundle.links.tested(record.cls);
    (tested ? degree_sample.tested_values : degree_sample.untested_values).push_back(static_cast<double>(record.degree));
    (tested ? betweenness_sample.tested_values : betweenness_sample.untested_values).push_back(record.betweenness);
  }
  for (const auto& [metric, sample] :
       {std::pair{kDegreeMetric, &degree_sample}, std::pair{kBetweennessMetric, &betweenness_sample}}) {
    if (sample->tested_values.empty() || sample->untested_values.empty()) {
      bundle.warnings.push_back(fmt::format("degenerate grouping for {}: {} tested, {} untested classes; test skipped",
                                            metric, sample->tested_values.size(), sample->untested_values.size()));
      continue;
    }
    bundle.stats.emplace(std::string(metric), mann_whitney_u(*sample));
  }
  return bundle;
}

AnnotationMap annotate(const AnalysisBundle& bundle) {
  AnnotationMap annotations;
  for (const auto& record : bundle.centrality) {
    const bool tight = record.degree_band == Band::tight || record.betweenness_band == Band::tight;
    const bool tested = bundle.links.tested(record.cls);
    annotations[record.cls] = {node_symbol(tight, tested), vertex_size(tight, record.degree), record.degree,
                               record.betweenness, tested};
  }
  return annotations;
}

std::vector<std::filesystem::path> write_graph(const AnalysisBundle& bundle, GraphFormat format,
                                               const std::filesystem::path& directory) {
  const auto annotations = annotate(bundle);
  auto path = directory / (format == GraphFormat::dot ? "graph.dot" : "graph.graphml");
  write_file(path, format == GraphFormat::dot ? export_dot(bundle.graph, annotations)
                                              : export_graphml(bundle.graph, annotations));
  return {path};
}

void prepare_output_directory(const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw InputError(fmt::format("cannot create output directory {}", directory.string()));
  }
}

RunOutput run_analysis(const RunConfig& config) {
  const auto inputs = load_inputs(config.trace_path, config.tests_path, config.meta_path);
  RunOutput output{analyze(inputs, config.options), {}};
  prepare_output_directory(config.out_dir);
  for (auto format : config.reports) {
    auto files = emit(output.bundle, format, config.out_dir);
    output.files.insert(output.files.end(), files.begin(), files.end());
  }
  for (auto format : config.graphs) {
    auto files = write_graph(output.bundle, format, config.out_dir);
    output.files.insert(output.files.end(), files.begin(), files.end());
  }
  return output;
}

std::vector<std::filesystem::path> run_synth(const SynthConfig& config, const std::filesystem::path& directory) {
  config.validate();
  const auto table = generate_system(config);
  const auto manifest = assign_tests(table, config);
  prepare_output_directory(directory);

  std::ostringstream trace;
  write_trace(trace, table, TraceFormat::jsonl);
  auto trace_path = directory / kSynthTraceFile;
  auto manifest_path = directory / kSynthManifestFile;
  write_file(trace_path, trace.str());
  write_file(manifest_path, write_manifest(manifest));
  return {trace_path, manifest_path};
}

}  // namespace dyncoup
