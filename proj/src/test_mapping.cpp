#include "dyncoup/test_mapping.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

namespace dyncoup {

namespace {

using nlohmann::json;

TestClass parse_test_class(const json& item, std::size_t index) {
  TestClass test;
  if (item.is_string()) {
    test.name = item.get<std::string>();
    return test;
  }
  if (!item.is_object()) throw InputError(fmt::format("test entry {} is neither a name nor an object", index));

  auto name = item.find("name");
  if (name == item.end() || !name->is_string()) {
    throw InputError(fmt::format("test entry {} has no string 'name'", index));
  }
  test.name = name->get<std::string>();

  if (auto count = item.find("test_case_count"); count != item.end()) {
    if (!count->is_number_unsigned()) {
      throw InputError(fmt::format("test entry '{}' has an invalid test_case_count", test.name));
    }
    test.test_case_count = count->get<std::uint64_t>();
  }
  if (auto invokes = item.find("invokes"); invokes != item.end()) {
    if (!invokes->is_array()) throw InputError(fmt::format("test entry '{}': 'invokes' must be a list", test.name));
    for (const auto& cls : *invokes) {
      if (!cls.is_string()) throw InputError(fmt::format("test entry '{}': non-string in 'invokes'", test.name));
      test.invoked_classes.push_back(cls.get<std::string>());
    }
  }
  return test;
}

std::vector<std::string> stems_for(std::string_view simple, NamingConvention convention) {
  constexpr std::string_view kMarker = "Test";
  std::vector<std::string> stems;
  if (convention != NamingConvention::prefix && simple.size() > kMarker.size() && simple.ends_with(kMarker)) {
    stems.emplace_back(simple.substr(0, simple.size() - kMarker.size()));
  }
  if (convention != NamingConvention::suffix && simple.size() > kMarker.size() && simple.starts_with(kMarker)) {
    stems.emplace_back(simple.substr(kMarker.size()));
  }
  return stems;
}

std::string_view package_of(std::string_view qualified) {
  auto dot = qualified.rfind('.');
  return dot == std::string_view::npos ? std::string_view{} : qualified.substr(0, dot);
}

}  // namespace

std::string_view simple_name(std::string_view qualified) {
  auto dot = qualified.rfind('.');
  return dot == std::string_view::npos ? qualified : qualified.substr(dot + 1);
}

std::vector<std::string> TestManifest::names() const {
  std::vector<std::string> out;
  out.reserve(test_classes.size());
  for (const auto& test : test_classes) out.push_back(test.name);
  return out;
}

void TestManifest::validate() const {
  std::set<std::string_view> seen;
  for (const auto& test : test_classes) {
    if (test.name.empty()) throw InputError("test class with empty name");
    if (!seen.insert(test.name).second) throw InputError("duplicate test class " + test.name);
    for (const auto& cls : test.invoked_classes) {
      if (cls.empty()) throw InputError("empty invoked class in test " + test.name);
    }
  }
}

TestManifest parse_manifest(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("invalid test manifest JSON: {}", e.what()));
  }
  const json* list = &doc;
  if (doc.is_object()) {
    auto it = doc.find("test_classes");
    if (it == doc.end()) throw InputError("test manifest object has no 'test_classes'");
    list = &*it;
  }
  if (!list->is_array()) throw InputError("test manifest must list test classes");

  TestManifest manifest;
  for (std::size_t i = 0; i < list->size(); ++i) manifest.test_classes.push_back(parse_test_class((*list)[i], i));
  manifest.validate();
  return manifest;
}

std::string write_manifest(const TestManifest& manifest) {
  json list = json::array();
  for (const auto& test : manifest.test_classes) {
    json item = json::object();
    item["name"] = test.name;
    item["test_case_count"] = test.test_case_count;
    item["invokes"] = test.invoked_classes;
    list.push_back(std::move(item));
  }
  json doc = json::object();
  doc["test_classes"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string_view to_string(Technique technique) {
  return technique == Technique::naming ? "naming" : "callgraph";
}

void TestLinkSet::add(const std::string& production_class, std::string test_class, Technique technique) {
  links_[production_class].insert({std::move(test_class), technique});
}

bool TestLinkSet::tested(std::string_view production_class) const {
  auto it = links_.find(production_class);
  return it != links_.end() && !it->second.empty();
}

std::size_t TestLinkSet::link_count() const {
  std::size_t total = 0;
  for (const auto& [cls, tests] : links_) total += tests.size();
  return total;
}

NamingConvention parse_naming_convention(std::string_view text) {
  if (text == "suffix") return NamingConvention::suffix;
  if (text == "prefix") return NamingConvention::prefix;
  if (text == "both") return NamingConvention::both;
  throw InputError(fmt::format("unknown naming convention '{}'", text));
}

NameMatchResult match_by_name(std::span<const std::string> test_names, std::span<const std::string> production_names,
                              NamingConvention convention) {
  std::set<std::string_view> production(production_names.begin(), production_names.end());
  std::map<std::string_view, std::vector<std::string_view>> by_simple;
  for (std::string_view cls : production) by_simple[simple_name(cls)].push_back(cls);

  NameMatchResult result;
  for (const auto& test : test_names) {
    const auto package = package_of(test);
    std::set<std::string_view> targets;
    bool ambiguous = false;
    for (const auto& stem : stems_for(simple_name(test), convention)) {
      const std::string qualified = package.empty() ? stem : fmt::format("{}.{}", package, stem);
      if (auto it = production.find(qualified); it != production.end()) {
        targets.insert(*it);
        continue;
      }
      if (auto it = by_simple.find(stem); it != by_simple.end()) {
        targets.insert(it->second.begin(), it->second.end());
        ambiguous = ambiguous || it->second.size() > 1;
      }
    }
    if (targets.empty()) {
      result.unmatched.push_back(test);
      continue;
    }
    if (ambiguous) {
      std::vector<std::string_view> sorted(targets.begin(), targets.end());
      result.warnings.push_back(
          fmt::format("ambiguous simple-name match for {}: linked to {}", test, fmt::join(sorted, ", ")));
    }
    for (std::string_view cls : targets) result.links.add(std::string(cls), test, Technique::naming);
  }
  return result;
}

TestLinkSet match_by_calls(const TestManifest& manifest, std::span<const std::string> production_names) {
  std::set<std::string_view> production(production_names.begin(), production_names.end());
  TestLinkSet links;
  for (const auto& test : manifest.test_classes) {
    for (const auto& cls : test.invoked_classes) {
      if (production.contains(cls)) links.add(cls, test.name, Technique::callgraph);
    }
  }
  return links;
}

TestLinkSet merge_links(const TestLinkSet& a, const TestLinkSet& b) {
  TestLinkSet merged = a;
  for (const auto& [cls, tests] : b.links()) {
    for (const auto& link : tests) merged.add(cls, link.test_class, link.technique);
  }
  return merged;
}

std::uint64_t count_ntc(const TestManifest& manifest) {
  std::uint64_t total = 0;
  for (const auto& test : manifest.test_classes) total += test.test_case_count;
  return total;
}

}  // namespace dyncoup
