// dyncoup: dynamic coupling vs. unit-test distribution analysis.
//
//   dyncoup analyze --trace trace.jsonl --tests tests.json --out report/
//   dyncoup graph   --trace trace.jsonl --tests tests.json --graph dot
//   dyncoup stats   --trace trace.jsonl --tests tests.json
//   dyncoup synth   --classes 200 --policy anti-coupling --seed 7 --out synth/
//
// Exit status: 0 success, 2 invalid input or flags, 1 internal error.

#include <omp.h>

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyncoup/pipeline.hpp"

namespace {

using namespace dyncoup;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

/// Flags shared by analyze, graph and stats.
struct AnalyzeFlags {
  std::string trace;
  std::string tests;
  std::string meta;
  std::vector<std::string> include;
  std::vector<std::string> exclude;
  std::string convention = "suffix";
  double alpha = 0.05;
  std::string out = "dyncoup-out";
  std::vector<std::string> reports{"md", "csv", "json"};
  std::vector<std::string> graphs{"dot", "graphml"};
};

void add_analysis_flags(CLI::App& cmd, AnalyzeFlags& flags, bool with_reports, bool with_graphs) {
  cmd.add_option("--trace", flags.trace, "Trace file (.jsonl, or .csv with header caller,callee,count)")->required();
  cmd.add_option("--tests", flags.tests, "Test manifest (JSON)");
  cmd.add_option("--meta", flags.meta, "Project metadata (key: value lines)");
  cmd.add_option("--include", flags.include, "Package prefix to keep (repeatable)")->delimiter(',');
  cmd.add_option("--exclude", flags.exclude, "Package prefix to drop (repeatable)")->delimiter(',');
  cmd.add_option("--convention", flags.convention, "Test naming convention")
      ->check(CLI::IsMember({"suffix", "prefix", "both"}))
      ->capture_default_str();
  cmd.add_option("--alpha", flags.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd.add_option("--out", flags.out, "Output directory")->capture_default_str();
  if (with_reports) {
    cmd.add_option("--report", flags.reports, "Report formats: md, csv, json")
        ->delimiter(',')
        ->check(CLI::IsMember({"md", "markdown", "csv", "json"}))
        ->capture_default_str();
  }
  if (with_graphs) {
    cmd.add_option("--graph", flags.graphs, "Graph exports: dot, graphml")
        ->delimiter(',')
        ->check(CLI::IsMember({"dot", "graphml"}))
        ->capture_default_str();
  }
}

RunConfig to_run_config(const AnalyzeFlags& flags) {
  RunConfig config;
  config.trace_path = flags.trace;
  if (!flags.tests.empty()) config.tests_path = flags.tests;
  if (!flags.meta.empty()) config.meta_path = flags.meta;
  config.options.scope = {flags.include, flags.exclude};
  config.options.convention = parse_naming_convention(flags.convention);
  config.options.alpha = flags.alpha;
  config.out_dir = flags.out;
  config.reports.clear();
  for (const auto& r : flags.reports) config.reports.push_back(parse_report_format(r));
  config.graphs.clear();
  for (const auto& g : flags.graphs) config.graphs.push_back(parse_graph_format(g));
  return config;
}

void print_warnings(const AnalysisBundle& bundle) {
  for (const auto& warning : bundle.warnings) std::cerr << "warning: " << warning << '\n';
}

void print_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& file : files) std::cout << file.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic coupling and unit-test distribution analysis"};
  app.set_config("--config", "", "Read flags from a TOML/INI file");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Threads for centrality (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  AnalyzeFlags analyze_flags;
  auto* analyze_cmd = app.add_subcommand("analyze", "Full pipeline: reports and graph exports");
  add_analysis_flags(*analyze_cmd, analyze_flags, true, true);

  AnalyzeFlags graph_flags;
  auto* graph_cmd = app.add_subcommand("graph", "Graph exports only");
  add_analysis_flags(*graph_cmd, graph_flags, false, true);

  AnalyzeFlags stats_flags;
  stats_flags.reports = {"md"};
  auto* stats_cmd = app.add_subcommand("stats", "Print the Mann-Whitney summary to stdout");
  add_analysis_flags(*stats_cmd, stats_flags, true, false);

  SynthConfig synth;
  std::string synth_out = "dyncoup-synth";
  std::string topology = "preferential";
  std::string policy = "random";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trace and test manifest");
  synth_cmd->add_option("--classes", synth.n_classes, "Number of classes")->capture_default_str();
  synth_cmd->add_option("--topology", topology, "uniform or preferential")
      ->check(CLI::IsMember({"uniform", "uniform-random", "preferential", "preferential-attachment"}))
      ->capture_default_str();
  synth_cmd->add_option("--edge-prob", synth.edge_prob, "Edge probability (uniform)")->capture_default_str();
  synth_cmd->add_option("--attachment,-m", synth.attachment, "Edges per new class (preferential)")
      ->capture_default_str();
  synth_cmd->add_option("--calls-min", synth.calls_min, "Minimum calls per directed entry")->capture_default_str();
  synth_cmd->add_option("--calls-max", synth.calls_max, "Maximum calls per directed entry")->capture_default_str();
  synth_cmd->add_option("--policy", policy, "random, coupling or anti-coupling")
      ->check(CLI::IsMember(
          {"random", "coupling", "coupling-biased", "anti-coupling", "anti-coupling-biased"}))
      ->capture_default_str();
  synth_cmd->add_option("--coverage", synth.coverage_fraction, "Fraction of classes given a test")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (analyze_cmd->parsed()) {
      auto output = run_analysis(to_run_config(analyze_flags));
      print_warnings(output.bundle);
      print_files(output.files);
    } else if (graph_cmd->parsed()) {
      auto config = to_run_config(graph_flags);
      config.reports.clear();
      auto output = run_analysis(config);
      print_warnings(output.bundle);
      print_files(output.files);
    } else if (stats_cmd->parsed()) {
      auto config = to_run_config(stats_flags);
      const auto inputs = load_inputs(config.trace_path, config.tests_path, config.meta_path);
      const auto bundle = analyze(inputs, config.options);
      print_warnings(bundle);
      switch (config.reports.empty() ? ReportFormat::markdown : config.reports.front()) {
        case ReportFormat::markdown: {
          // just the statistics section
          const auto md = render_markdown(bundle);
          const auto start = md.find("## Mann-Whitney U test");
          const auto end = md.find("\n## ", start + 1);
          std::cout << md.substr(start, end == std::string::npos ? std::string::npos : end - start + 1);
          break;
        }
        case ReportFormat::csv:
          std::cout << render_csv(bundle).at("stats.csv");
          break;
        case ReportFormat::json:
          std::cout << render_json(bundle);
          break;
      }
    } else if (synth_cmd->parsed()) {
      synth.topology = parse_topology(topology);
      synth.policy = parse_test_policy(policy);
      print_files(run_synth(synth, synth_out));
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
