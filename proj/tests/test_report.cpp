#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dyncoup/report.hpp"
#include "report_fixtures.hpp"

using namespace dyncoup;

TEST_CASE("per_class_table follows the degree, betweenness, name ordering") {
  auto bundle = fixtures::jdepend_bundle();
  auto rows = per_class_table(bundle);
  REQUIRE(rows.size() == 20);
  CHECK(rows[0].cls == "framework.JDepend");
  CHECK(rows[0].degree == 9);
  CHECK(rows[0].betweenness == 92.8);
  CHECK(rows[0].tested);
  CHECK(rows[1].cls == "JavaPackage");
  // imposed order puts AbstractParser (2, 18.0) before FileManager (2, 0.5)
  auto pos = [&](const std::string& cls) {
    return std::find_if(rows.begin(), rows.end(), [&](const ClassRow& r) { return r.cls == cls; }) - rows.begin();
  };
  CHECK(pos("AbstractParser") < pos("FileManager"));
  // equal on both metrics: lexicographic
  CHECK(pos("AfferentNode") < pos("DependTree"));
  CHECK(pos("PropertyConfigurator") < pos("xmlui.JDepend"));
  CHECK(per_class_table(AnalysisBundle{}).empty());
}

TEST_CASE("markdown per-class table reproduces the column header and row format") {
  auto md = render_markdown(fixtures::jdepend_bundle());
  CHECK(md.find("| Class | Degree Centrality | Betweenness Centrality | Unit test? |") != std::string::npos);
  CHECK(md.find("| framework.JDepend | 9 | 92.8 | Yes |") != std::string::npos);
  CHECK(md.find("| StatusPanel | 1 | 0.0 | No |") != std::string::npos);
}

TEST_CASE("quartile_summary counts tested classes in the outer bands") {
  SUBCASE("164 tight classes with 11 tested round to 7%") {
    auto bundle = fixtures::band_bundle(164, 11, 0, 0);
    auto summary = quartile_summary(bundle);
    CHECK(summary.degree.tight_total == 164);
    CHECK(summary.degree.tight_tested == 11);
    CHECK(summary.degree.tight_proportion() == doctest::Approx(0.067).epsilon(0.01));
    CHECK(rounded_percent(summary.degree.tight_proportion()) == 7);
  }
  SUBCASE("an empty band reports proportion 0") {
    auto summary = quartile_summary(fixtures::band_bundle(5, 2, 0, 0));
    CHECK(summary.degree.loose_total == 0);
    CHECK(summary.degree.loose_proportion() == 0.0);
  }
  SUBCASE("fully tested band") {
    auto summary = quartile_summary(fixtures::band_bundle(6, 6, 3, 1));
    CHECK(summary.degree.tight_proportion() == 1.0);
    CHECK(summary.degree.loose_tested == 1);
    CHECK(summary.degree.loose_tested <= summary.degree.loose_total);
  }
}

TEST_CASE("stats_summary flags significance at alpha") {
  AnalysisBundle bundle;
  StatResult significant;
  significant.p_two_tailed = 0.001;
  significant.ez = 0.12;
  significant.cohen = cohen_classify(0.12);
  StatResult not_significant;
  not_significant.p_two_tailed = 0.50;
  bundle.stats.emplace(std::string(kBetweennessMetric), significant);
  bundle.stats.emplace(std::string(kDegreeMetric), not_significant);

  auto rows = stats_summary(bundle);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].metric == kBetweennessMetric);
  CHECK(rows[0].significant);
  CHECK(rows[0].result.cohen == EffectSize::small);
  CHECK_FALSE(rows[1].significant);

  auto md = render_markdown(bundle);
  CHECK(md.find("| Betweenness Centrality | 0.0 | 0.00 | 0.00 | 0.12 | small | Yes |") != std::string::npos);
  CHECK(md.find("| Degree Centrality | 0.0 | 0.00 | 0.50 | 0.00 | small | No |") != std::string::npos);

  AnalysisBundle zero;
  zero.stats.emplace(std::string(kDegreeMetric), mann_whitney_u({{1, 2, 3}, {1, 2, 3}}));
  auto zero_rows = stats_summary(zero);
  CHECK(zero_rows[0].result.p_two_tailed == 1.0);
  CHECK(zero_rows[0].result.ez == 0.0);
  CHECK_FALSE(zero_rows[0].significant);
}

TEST_CASE("csv headers match the table columns") {
  auto files = render_csv(fixtures::jdepend_bundle());
  REQUIRE(files.size() == 3);
  CHECK(files["per_class.csv"].starts_with("Class,Degree Centrality,Betweenness Centrality,Unit test?\n"
                                           "framework.JDepend,9,92.8,Yes\n"));
  CHECK(files["stats.csv"].starts_with("Metric,U,z,alpha,ez,Effect size,Significant\n"));
  CHECK(files["quartiles.csv"].find("Degree Centrality,") != std::string::npos);
}

TEST_CASE("machine output agrees with human output after rounding") {
  auto bundle = fixtures::jdepend_bundle();
  bundle.stats.emplace(std::string(kDegreeMetric), mann_whitney_u({{9, 9, 3, 3, 3, 2, 2}, {5, 5, 4, 4, 3, 2, 1, 1}}));
  auto doc = nlohmann::json::parse(render_json(bundle));
  auto csv = render_csv(bundle).at("per_class.csv");

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  for (const auto& row : doc["per_class"]) {
    REQUIRE(std::getline(lines, line));
    auto expected = fmt::format("{},{},{:.1f},{}", row["class"].get<std::string>(), row["degree"].get<int>(),
                                row["betweenness"].get<double>(), row["tested"].get<bool>() ? "Yes" : "No");
    CHECK(line == expected);
  }
  const auto& stat = doc["stats"][0];
  auto stats_csv = render_csv(bundle).at("stats.csv");
  CHECK(stats_csv.find(fmt::format("{:.2f},{:.2f}", stat["p"].get<double>(), stat["ez"].get<double>())) !=
        std::string::npos);
  CHECK(stat["ez"].get<double>() == std::abs(stat["z"].get<double>()) / std::sqrt(stat["n"].get<double>()));
}

TEST_CASE("json report carries tool version, metadata and warnings") {
  auto bundle = fixtures::jdepend_bundle();
  bundle.meta.name = "JDepend";
  bundle.meta.kloc = 2.460;
  bundle.meta.noc = 29;
  bundle.warnings.push_back("test CycleTest matches no production class by naming convention");
  auto doc = nlohmann::json::parse(render_json(bundle));
  CHECK(doc["tool"]["version"] == std::string(kToolVersion));
  CHECK(doc["meta"]["size_band"] == "small");
  CHECK(doc["meta"]["noc"] == 29);
  CHECK(doc["warnings"].size() == 1);
  CHECK(doc["per_class"].size() == 20);
  CHECK(doc["per_class"][0]["class"] == "framework.JDepend");
}

TEST_CASE("emit writes deterministic files and rejects unknown formats") {
  auto dir = std::filesystem::temp_directory_path() / "dyncoup_report_emit";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto bundle = fixtures::jdepend_bundle();

  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (auto format : {ReportFormat::markdown, ReportFormat::csv, ReportFormat::json}) {
    auto first = emit(bundle, format, dir);
    std::vector<std::string> contents;
    for (const auto& p : first) contents.push_back(read(p));
    auto second = emit(bundle, format, dir);
    REQUIRE(first == second);
    for (std::size_t i = 0; i < second.size(); ++i) CHECK(read(second[i]) == contents[i]);
  }
  CHECK(parse_report_format("md") == ReportFormat::markdown);
  CHECK_THROWS_AS(parse_report_format("xlsx"), InputError);
  CHECK_THROWS_AS(emit(bundle, ReportFormat::json, dir / "missing" / "nested"), InputError);
  std::filesystem::remove_all(dir);
}
