#include "dyncoup/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

namespace dyncoup {

namespace {

using nlohmann::json;

std::string metric_title(std::string_view metric) {
  return metric == kDegreeMetric ? "Degree Centrality" : "Betweenness Centrality";
}

std::string fixed(double value, int decimals) {
  auto text = fmt::format("{:.{}f}", value, decimals);
  // never print "-0.0"
  if (text.starts_with('-') && text.find_first_not_of("-0.") == std::string::npos) text.erase(0, 1);
  return text;
}

std::string markdown_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string csv_cell(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const char* yes_no(bool value) { return value ? "Yes" : "No"; }

void count_band(BandCounts& counts, Band band, bool tested) {
  if (band == Band::tight) {
    ++counts.tight_total;
    counts.tight_tested += tested ? 1 : 0;
  } else if (band == Band::loose) {
    ++counts.loose_total;
    counts.loose_tested += tested ? 1 : 0;
  }
}

double proportion(std::size_t part, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(total);
}

json band_json(const BandCounts& counts) {
  return {{"tight_total", counts.tight_total},
          {"tight_tested", counts.tight_tested},
          {"tight_proportion", counts.tight_proportion()},
          {"tight_percent", rounded_percent(counts.tight_proportion())},
          {"loose_total", counts.loose_total},
          {"loose_tested", counts.loose_tested},
          {"loose_proportion", counts.loose_proportion()},
          {"loose_percent", rounded_percent(counts.loose_proportion())}};
}

std::size_t tested_class_count(const AnalysisBundle& bundle) {
  return static_cast<std::size_t>(std::count_if(bundle.centrality.begin(), bundle.centrality.end(),
                                                [&](const auto& r) { return bundle.links.tested(r.cls); }));
}

}  // namespace

std::vector<ClassRow> per_class_table(const AnalysisBundle& bundle) {
  std::vector<ClassRow> rows;
  rows.reserve(bundle.centrality.size());
  for (const auto& record : bundle.centrality) {
    rows.push_back({record.cls, record.degree, record.betweenness, bundle.links.tested(record.cls)});
  }
  std::sort(rows.begin(), rows.end(), [](const ClassRow& a, const ClassRow& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    if (a.betweenness != b.betweenness) return a.betweenness > b.betweenness;
    return a.cls < b.cls;
  });
  return rows;
}

double BandCounts::tight_proportion() const { return proportion(tight_tested, tight_total); }
double BandCounts::loose_proportion() const { return proportion(loose_tested, loose_total); }

QuartileSummary quartile_summary(const AnalysisBundle& bundle) {
  QuartileSummary summary;
  for (const auto& record : bundle.centrality) {
    const bool tested = bundle.links.tested(record.cls);
    count_band(summary.degree, record.degree_band, tested);
    count_band(summary.betweenness, record.betweenness_band, tested);
  }
  return summary;
}

long rounded_percent(double value) { return std::lround(value * 100.0); }

std::vector<StatsRow> stats_summary(const AnalysisBundle& bundle) {
  std::vector<StatsRow> rows;
  for (auto metric : {kBetweennessMetric, kDegreeMetric}) {
    auto it = bundle.stats.find(metric);
    if (it == bundle.stats.end()) continue;
    rows.push_back({std::string(metric), it->second, it->second.p_two_tailed < bundle.alpha});
  }
  return rows;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "md" || text == "markdown") return ReportFormat::markdown;
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw InputError(fmt::format("unknown report format '{}'", text));
}

std::string render_markdown(const AnalysisBundle& bundle) {
  const auto& meta = bundle.meta;
  std::string out = fmt::format("# Dynamic coupling report{}\n\n", meta.name.empty() ? "" : ": " + meta.name);

  out += fmt::format("- Size: {} ({:.3f} KLOC)\n", to_string(size_band(meta.kloc)), meta.kloc);
  out += fmt::format("- Classes in graph: {}\n", bundle.graph.node_count());
  out += fmt::format("- Dependencies: {}\n", bundle.graph.edge_count());
  out += fmt::format("- Test classes: {}\n", bundle.test_class_count);
  out += fmt::format("- NTC: {}\n", bundle.ntc);
  out += fmt::format("- Tested classes: {}\n\n", tested_class_count(bundle));

  out += "## Centrality metrics\n\n";
  out += "| Class | Degree Centrality | Betweenness Centrality | Unit test? |\n";
  out += "|---|---:|---:|---|\n";
  for (const auto& row : per_class_table(bundle)) {
    out += fmt::format("| {} | {} | {} | {} |\n", markdown_cell(row.cls), row.degree, fixed(row.betweenness, 1),
                       yes_no(row.tested));
  }

  out += "\n## Levels of centrality\n\n";
  out += "| Metric | Tested above Q3 | Classes above Q3 | Proportion above Q3 | Tested below Q1 | Classes below Q1 "
         "| Proportion below Q1 |\n";
  out += "|---|---:|---:|---:|---:|---:|---:|\n";
  const auto summary = quartile_summary(bundle);
  for (auto [metric, counts] : {std::pair{kDegreeMetric, summary.degree}, std::pair{kBetweennessMetric, summary.betweenness}}) {
    out += fmt::format("| {} | {} | {} | {}% | {} | {} | {}% |\n", metric_title(metric), counts.tight_tested,
                       counts.tight_total, rounded_percent(counts.tight_proportion()), counts.loose_tested,
                       counts.loose_total, rounded_percent(counts.loose_proportion()));
  }

  out += "\n## Mann-Whitney U test\n\n";
  out += fmt::format("Two-tailed, significance level {}.\n\n", bundle.alpha);
  out += "| Metric | U | z | α (p) | ez | Effect size | Significant |\n";
  out += "|---|---:|---:|---:|---:|---|---|\n";
  for (const auto& row : stats_summary(bundle)) {
    const auto& r = row.result;
    out += fmt::format("| {} | {} | {} | {} | {} | {} | {} |\n", metric_title(row.metric), fixed(r.u, 1),
                       fixed(r.z, 2), fixed(r.p_two_tailed, 2), fixed(r.ez, 2), to_string(r.cohen),
                       yes_no(row.significant));
  }

  if (!bundle.warnings.empty()) {
    out += "\n## Warnings\n\n";
    for (const auto& warning : bundle.warnings) out += fmt::format("- {}\n", warning);
  }
  return out;
}

std::map<std::string, std::string> render_csv(const AnalysisBundle& bundle) {
  std::map<std::string, std::string> files;

  std::string per_class = "Class,Degree Centrality,Betweenness Centrality,Unit test?\n";
  for (const auto& row : per_class_table(bundle)) {
    per_class += fmt::format("{},{},{},{}\n", csv_cell(row.cls), row.degree, fixed(row.betweenness, 1), yes_no(row.tested));
  }
  files["per_class.csv"] = std::move(per_class);

  std::string quartiles =
      "Metric,Tested above Q3,Classes above Q3,Proportion above Q3,Percent above Q3,"
      "Tested below Q1,Classes below Q1,Proportion below Q1,Percent below Q1\n";
  const auto summary = quartile_summary(bundle);
  for (auto [metric, counts] : {std::pair{kDegreeMetric, summary.degree}, std::pair{kBetweennessMetric, summary.betweenness}}) {
    quartiles += fmt::format("{},{},{},{},{},{},{},{},{}\n", metric_title(metric), counts.tight_tested,
                             counts.tight_total, fixed(counts.tight_proportion(), 3),
                             rounded_percent(counts.tight_proportion()), counts.loose_tested, counts.loose_total,
                             fixed(counts.loose_proportion(), 3), rounded_percent(counts.loose_proportion()));
  }
  files["quartiles.csv"] = std::move(quartiles);

  std::string stats = "Metric,U,z,alpha,ez,Effect size,Significant\n";
  for (const auto& row : stats_summary(bundle)) {
    const auto& r = row.result;
    stats += fmt::format("{},{},{},{},{},{},{}\n", metric_title(row.metric), fixed(r.u, 1), fixed(r.z, 2),
                         fixed(r.p_two_tailed, 2), fixed(r.ez, 2), to_string(r.cohen), yes_no(row.significant));
  }
  files["stats.csv"] = std::move(stats);
  return files;
}

std::string render_json(const AnalysisBundle& bundle) {
  const auto& meta = bundle.meta;
  json meta_json = {{"name", meta.name}, {"kloc", meta.kloc}, {"size_band", to_string(size_band(meta.kloc))}};
  if (meta.test_kloc) meta_json["test_kloc"] = *meta.test_kloc;
  if (meta.noc) meta_json["noc"] = *meta.noc;
  if (meta.statement_coverage) meta_json["statement_coverage"] = *meta.statement_coverage;
  if (meta.class_coverage) meta_json["class_coverage"] = *meta.class_coverage;

  std::map<std::string_view, const CentralityRecord*> by_class;
  for (const auto& record : bundle.centrality) by_class[record.cls] = &record;

  json per_class = json::array();
  for (const auto& row : per_class_table(bundle)) {
    const auto& record = *by_class.at(row.cls);
    json tests = json::array();
    if (auto it = bundle.links.links().find(row.cls); it != bundle.links.links().end()) {
      for (const auto& link : it->second) tests.push_back({{"test", link.test_class}, {"technique", to_string(link.technique)}});
    }
    auto dcbo = bundle.dcbo.find(row.cls);
    per_class.push_back({{"class", row.cls},
                         {"degree", row.degree},
                         {"betweenness", row.betweenness},
                         {"tested", row.tested},
                         {"dcbo", dcbo == bundle.dcbo.end() ? 0 : dcbo->second},
                         {"degree_band", to_string(record.degree_band)},
                         {"betweenness_band", to_string(record.betweenness_band)},
                         {"tests", std::move(tests)}});
  }

  const auto summary = quartile_summary(bundle);
  json stats = json::array();
  for (const auto& row : stats_summary(bundle)) {
    const auto& r = row.result;
    stats.push_back({{"metric", row.metric},
                     {"u", r.u},
                     {"u1", r.u1},
                     {"u2", r.u2},
                     {"z", r.z},
                     {"p", r.p_two_tailed},
                     {"ez", r.ez},
                     {"cohen", to_string(r.cohen)},
                     {"significant", row.significant},
                     {"n", r.n},
                     {"n_tested", r.n_tested},
                     {"n_untested", r.n_untested}});
  }

  json doc = {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
              {"meta", std::move(meta_json)},
              {"summary",
               {{"classes", bundle.graph.node_count()},
                {"dependencies", bundle.graph.edge_count()},
                {"test_classes", bundle.test_class_count},
                {"ntc", bundle.ntc},
                {"tested_classes", tested_class_count(bundle)}}},
              {"per_class", std::move(per_class)},
              {"quartiles", {{"degree", band_json(summary.degree)}, {"betweenness", band_json(summary.betweenness)}}},
              {"stats", std::move(stats)},
              {"alpha", bundle.alpha},
              {"warnings", bundle.warnings}};
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot open {} for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw InputError(fmt::format("failed writing {}", path.string()));
}

std::vector<std::filesystem::path> emit(const AnalysisBundle& bundle, ReportFormat format,
                                        const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, std::string_view contents) {
    auto path = directory / name;
    write_file(path, contents);
    written.push_back(std::move(path));
  };
  switch (format) {
    case ReportFormat::markdown:
      put("report.md", render_markdown(bundle));
      break;
    case ReportFormat::csv:
      for (const auto& [name, contents] : render_csv(bundle)) put(name, contents);
      break;
    case ReportFormat::json:
      put("report.json", render_json(bundle));
      break;
  }
  return written;
}

}  // namespace dyncoup
