#include <doctest.h>

#include <sstream>

#include "dyncoup/test_mapping.hpp"
#include "oracles/oracles.hpp"

using namespace dyncoup;

namespace {

using Names = std::vector<std::string>;

std::set<TestLink> links_of(const TestLinkSet& set, const std::string& cls) {
  auto it = set.links().find(cls);
  return it == set.links().end() ? std::set<TestLink>{} : it->second;
}

TestLinkSet random_links(oracle::SplitMix& rng) {
  TestLinkSet set;
  const Names classes{"A", "B", "C", "D"};
  const Names tests{"ATest", "XTest", "YTest"};
  for (std::size_t i = rng.range(0, 6); i > 0; --i) {
    set.add(classes[rng.range(0, 3)], tests[rng.range(0, 2)],
            rng.range(0, 1) == 0 ? Technique::naming : Technique::callgraph);
  }
  return set;
}

}  // namespace

TEST_CASE("match_by_name suffix convention") {
  Names tests{"FooTest"};
  Names prod{"Foo", "Bar"};
  auto result = match_by_name(tests, prod, NamingConvention::suffix);
  CHECK(links_of(result.links, "Foo") == std::set<TestLink>{{"FooTest", Technique::naming}});
  CHECK_FALSE(result.links.tested("Bar"));
  CHECK(result.unmatched.empty());
}

TEST_CASE("match_by_name prefix and both conventions") {
  Names tests{"TestFoo"};
  Names prod{"Foo"};
  auto suffix = match_by_name(tests, prod, NamingConvention::suffix);
  CHECK(suffix.links.empty());
  CHECK(suffix.unmatched == tests);
  CHECK(match_by_name(tests, prod, NamingConvention::prefix).links.tested("Foo"));
  CHECK(match_by_name(tests, prod, NamingConvention::both).links.tested("Foo"));

  Names mixed{"BarTest", "TestFoo"};
  Names prod2{"Foo", "Bar"};
  auto both = match_by_name(mixed, prod2, NamingConvention::both);
  CHECK(both.links.tested("Foo"));
  CHECK(both.links.tested("Bar"));
}

TEST_CASE("match_by_name with no production classes") {
  Names tests{"FooTest"};
  auto result = match_by_name(tests, Names{}, NamingConvention::suffix);
  CHECK(result.links.empty());
  CHECK(result.unmatched == tests);
}

TEST_CASE("match_by_name prefers the package-qualified match") {
  Names prod{"jdepend.framework.JDepend", "jdepend.swingui.JDepend", "jdepend.textui.JDepend"};
  Names qualified{"jdepend.framework.JDependTest"};
  auto result = match_by_name(qualified, prod);
  CHECK(result.links.links().size() == 1);
  CHECK(result.links.tested("jdepend.framework.JDepend"));
  CHECK(result.warnings.empty());

  Names unqualified{"JDependTest"};
  auto ambiguous = match_by_name(unqualified, prod);
  CHECK(ambiguous.links.links().size() == 3);
  REQUIRE(ambiguous.warnings.size() == 1);
  CHECK(ambiguous.warnings[0].find("ambiguous") != std::string::npos);
}

TEST_CASE("match_by_name ignores the bare marker and partial stems") {
  Names prod{"Foo", "FooBar", "Test"};
  Names tests{"Test", "FooBarTest", "BarTest"};
  auto result = match_by_name(tests, prod);
  CHECK(links_of(result.links, "FooBar").size() == 1);
  CHECK_FALSE(result.links.tested("Foo"));
  CHECK(result.unmatched == Names{"Test", "BarTest"});
}

TEST_CASE("suffix matching only links exact stems") {
  oracle::SplitMix rng(12);
  const Names pool{"a.Foo", "b.Foo", "a.FooBar", "Bar", "c.Baz", "Qux"};
  const Names test_pool{"FooTest", "a.FooTest", "BarTest", "a.FooBarTest", "TestQux", "BazTests", "c.BazTest"};
  for (int trial = 0; trial < 100; ++trial) {
    Names prod;
    for (const auto& p : pool) {
      if (rng.range(0, 1)) prod.push_back(p);
    }
    Names tests;
    for (const auto& t : test_pool) {
      if (rng.range(0, 1)) tests.push_back(t);
    }
    auto result = match_by_name(tests, prod, NamingConvention::suffix);
    for (const auto& [cls, links] : result.links.links()) {
      for (const auto& link : links) {
        auto simple = std::string(simple_name(link.test_class));
        CHECK(simple == std::string(simple_name(cls)) + "Test");
      }
    }
  }
}

TEST_CASE("match_by_calls") {
  TestManifest manifest{{{"T", 3, {"A", "B"}}}};
  Names prod{"A", "B", "C"};
  auto links = match_by_calls(manifest, prod);
  CHECK(links_of(links, "A") == std::set<TestLink>{{"T", Technique::callgraph}});
  CHECK(links.tested("B"));
  CHECK_FALSE(links.tested("C"));

  TestManifest outside{{{"T", 1, {"lib.X"}}}};
  Names just_a{"A"};
  CHECK(match_by_calls(outside, just_a).empty());
  CHECK(match_by_calls(TestManifest{}, prod).empty());
}

TEST_CASE("merge_links unions and keeps technique tags") {
  TestLinkSet naming;
  naming.add("A", "ATest", Technique::naming);
  TestLinkSet calls;
  calls.add("A", "ZTest", Technique::callgraph);
  calls.add("B", "ZTest", Technique::callgraph);

  auto merged = merge_links(naming, calls);
  CHECK(links_of(merged, "A").size() == 2);
  CHECK(merged.tested("B"));
  CHECK(merge_links(naming, TestLinkSet{}) == naming);
  CHECK(merge_links(TestLinkSet{}, calls) == calls);
}

TEST_CASE("merge_links is commutative, associative and idempotent") {
  oracle::SplitMix rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_links(rng);
    auto b = random_links(rng);
    auto c = random_links(rng);
    CHECK(merge_links(a, b) == merge_links(b, a));
    CHECK(merge_links(merge_links(a, b), c) == merge_links(a, merge_links(b, c)));
    CHECK(merge_links(a, a) == a);
  }
}

TEST_CASE("tested is monotone as the manifest grows") {
  const Names prod{"p.A", "p.B", "p.C", "p.D"};
  const std::vector<TestClass> pool{
      {"p.ATest", 1, {}}, {"p.XTest", 2, {"p.B"}}, {"p.CTest", 1, {"p.D"}}, {"q.YTest", 1, {"p.C", "lib.Z"}}};
  TestManifest manifest;
  std::set<std::string> tested_before;
  for (const auto& entry : pool) {
    manifest.test_classes.push_back(entry);
    auto links = merge_links(match_by_name(manifest.names(), prod).links, match_by_calls(manifest, prod));
    std::set<std::string> tested_now;
    for (const auto& cls : prod) {
      if (links.tested(cls)) tested_now.insert(cls);
    }
    CHECK(std::includes(tested_now.begin(), tested_now.end(), tested_before.begin(), tested_before.end()));
    tested_before = tested_now;
  }
  CHECK(tested_before.size() == 4);
}

TEST_CASE("count_ntc") {
  CHECK(count_ntc(TestManifest{{{"ATest", 3, {}}, {"BTest", 5, {}}}}) == 8);
  CHECK(count_ntc(TestManifest{}) == 0);
}

TEST_CASE("parse_manifest accepts full, bare-list and names-only forms") {
  std::istringstream full(R"({"test_classes":[{"name":"ATest","test_case_count":4,"invokes":["A","B"]}]})");
  auto manifest = parse_manifest(full);
  REQUIRE(manifest.test_classes.size() == 1);
  CHECK(manifest.test_classes[0] == TestClass{"ATest", 4, {"A", "B"}});

  std::istringstream names(R"(["ATest","BTest"])");
  auto shorthand = parse_manifest(names);
  CHECK(shorthand.names() == Names{"ATest", "BTest"});
  CHECK(count_ntc(shorthand) == 0);

  std::istringstream written(write_manifest(manifest));
  CHECK(parse_manifest(written) == manifest);
}

TEST_CASE("parse_manifest rejects bad documents") {
  for (const char* text : {R"({"tests":[]})", R"(["ATest","ATest"])", R"([{"name":"T","invokes":[""]}])",
                           R"([{"name":"T","test_case_count":-1}])", R"([{"test_case_count":1}])", "{", "42"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_manifest(in), InputError);
  }
}
