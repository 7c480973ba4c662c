#include "dyncoup/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace dyncoup {

namespace {

using nlohmann::json;

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

void check_class_name(std::string_view value, std::string_view field, std::size_t line) {
  if (value.empty()) throw InputError(fmt::format("empty {} at line {}", field, line));
  if (has_whitespace(value)) {
    throw InputError(fmt::format("whitespace in {} at line {}", field, line));
  }
}

std::uint64_t parse_count_text(std::string_view text, std::size_t line) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value == 0) {
    throw InputError(fmt::format("invalid count at line {}", line));
  }
  return value;
}

CallRecord parse_jsonl_row(std::string_view line_text, std::size_t line) {
  json row;
  try {
    row = json::parse(line_text);
  } catch (const json::parse_error&) {
    throw InputError(fmt::format("invalid JSON at line {}", line));
  }
  if (!row.is_object()) throw InputError(fmt::format("row is not an object at line {}", line));

  auto required_string = [&](const char* key) {
    auto it = row.find(key);
    if (it == row.end()) throw InputError(fmt::format("missing {} at line {}", key, line));
    if (!it->is_string()) throw InputError(fmt::format("non-string {} at line {}", key, line));
    auto value = it->get<std::string>();
    check_class_name(value, key, line);
    return value;
  };
  auto optional_string = [&](const char* key) -> std::optional<std::string> {
    auto it = row.find(key);
    if (it == row.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw InputError(fmt::format("non-string {} at line {}", key, line));
    return it->get<std::string>();
  };

  CallRecord record;
  record.caller = required_string("caller");
  record.callee = required_string("callee");
  record.caller_method = optional_string("caller_method");
  record.callee_method = optional_string("callee_method");
  if (auto it = row.find("count"); it != row.end()) {
    // the parser stores every nonnegative integer literal as unsigned
    if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0) {
      throw InputError(fmt::format("invalid count at line {}", line));
    }
    record.count = it->get<std::uint64_t>();
  }
  return record;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

CallRecord parse_csv_row(std::string_view line_text, std::size_t line) {
  auto fields = split_commas(line_text);
  if (fields.size() < 2 || fields.size() > 3) {
    throw InputError(fmt::format("expected 3 fields (caller,callee,count) at line {}", line));
  }
  CallRecord record;
  record.caller = std::string(trim(fields[0]));
  record.callee = std::string(trim(fields[1]));
  check_class_name(record.caller, "caller", line);
  check_class_name(record.callee, "callee", line);
  if (fields.size() == 3 && !trim(fields[2]).empty()) record.count = parse_count_text(fields[2], line);
  return record;
}

}  // namespace

bool ScopeFilter::in_scope(std::string_view cls) const {
  auto matches = [cls](const std::string& prefix) { return cls.starts_with(prefix); };
  if (!include_prefixes.empty() && std::none_of(include_prefixes.begin(), include_prefixes.end(), matches)) {
    return false;
  }
  return std::none_of(exclude_prefixes.begin(), exclude_prefixes.end(), matches);
}

void InvocationTable::add(const std::string& caller, const std::string& callee, std::uint64_t count) {
  if (caller == callee) throw std::invalid_argument("self-call in invocation table: " + caller);
  if (count == 0) throw std::invalid_argument("zero invocation count");
  entries_[{caller, callee}] += count;
}

std::uint64_t InvocationTable::count(const std::string& caller, const std::string& callee) const {
  auto it = entries_.find({caller, callee});
  return it == entries_.end() ? 0 : it->second;
}

InvocationTable InvocationTable::transposed() const {
  InvocationTable out;
  for (const auto& [pair, count] : entries_) out.add(pair.second, pair.first, count);
  return out;
}

TraceFormat trace_format_for_path(std::string_view path) {
  return path.ends_with(".csv") ? TraceFormat::csv : TraceFormat::jsonl;
}

std::vector<CallRecord> parse_trace(std::istream& in, TraceFormat format) {
  std::vector<CallRecord> records;
  std::string line_text;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, line_text)) {
    ++line;
    if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
    // UTF-8 byte order mark on the first line
    if (line == 1 && line_text.starts_with("\xEF\xBB\xBF")) line_text.erase(0, 3);
    if (is_blank(line_text)) continue;

    if (format == TraceFormat::jsonl) {
      records.push_back(parse_jsonl_row(line_text, line));
      continue;
    }
    if (!header_seen) {
      if (trim(line_text) != "caller,callee,count") {
        throw InputError(fmt::format("expected header 'caller,callee,count' at line {}", line));
      }
      header_seen = true;
      continue;
    }
    records.push_back(parse_csv_row(line_text, line));
  }
  if (in.bad()) throw InputError("read error while parsing trace");
  return records;
}

void write_trace(std::ostream& out, const InvocationTable& table, TraceFormat format) {
  if (format == TraceFormat::csv) {
    out << "caller,callee,count\n";
    for (const auto& [pair, count] : table.entries()) {
      out << pair.first << ',' << pair.second << ',' << count << '\n';
    }
    return;
  }
  for (const auto& [pair, count] : table.entries()) {
    json row = json::object();
    row["caller"] = pair.first;
    row["callee"] = pair.second;
    row["count"] = count;
    out << row.dump() << '\n';
  }
}

std::vector<CallRecord> filter_scope(std::span<const CallRecord> records, const ScopeFilter& filter) {
  std::vector<CallRecord> kept;
  kept.reserve(records.size());
  for (const auto& record : records) {
    if (filter.in_scope(record.caller) && filter.in_scope(record.callee)) kept.push_back(record);
  }
  return kept;
}

InvocationTable aggregate(std::span<const CallRecord> records) {
  InvocationTable table;
  for (const auto& record : records) {
    if (record.caller == record.callee) continue;
    table.add(record.caller, record.callee, record.count);
  }
  return table;
}

ProjectMeta parse_meta(std::istream& in) {
  ProjectMeta meta;
  std::string line_text;
  std::size_t line = 0;

  auto parse_real = [&](std::string_view value, std::string_view key) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out) || out < 0.0) {
      throw InputError(fmt::format("invalid {} at line {}", key, line));
    }
    return out;
  };
  auto parse_fraction = [&](std::string_view value, std::string_view key) {
    double out = parse_real(value, key);
    if (out > 1.0) throw InputError(fmt::format("{} must lie in [0,1] at line {}", key, line));
    return out;
  };

  while (std::getline(in, line_text)) {
    ++line;
    std::string_view text = line_text;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InputError(fmt::format("expected 'key: value' at line {}", line));
    auto key = trim(text.substr(0, colon));
    auto value = trim(text.substr(colon + 1));

    if (key == "name") {
      meta.name = std::string(value);
    } else if (key == "kloc") {
      meta.kloc = parse_real(value, key);
    } else if (key == "test_kloc") {
      meta.test_kloc = parse_real(value, key);
    } else if (key == "noc") {
      double noc = parse_real(value, key);
      if (noc < 1.0 || noc != std::floor(noc)) throw InputError(fmt::format("invalid noc at line {}", line));
      meta.noc = static_cast<std::uint64_t>(noc);
    } else if (key == "statement_coverage") {
      meta.statement_coverage = parse_fraction(value, key);
    } else if (key == "class_coverage") {
      meta.class_coverage = parse_fraction(value, key);
    } else {
      throw InputError(fmt::format("unknown metadata key '{}' at line {}", key, line));
    }
  }
  return meta;
}

SizeBand size_band(double kloc) {
  if (!(kloc >= 0.0)) throw std::invalid_argument("kloc must be nonnegative");
  if (kloc < 1.0) return SizeBand::tiny;
  if (kloc < 10.0) return SizeBand::small;
  if (kloc < 100.0) return SizeBand::medium;
  if (kloc < 1000.0) return SizeBand::large;
  return SizeBand::extra_large;
}

std::string_view to_string(SizeBand band) {
  switch (band) {
    case SizeBand::tiny: return "tiny";
    case SizeBand::small: return "small";
    case SizeBand::medium: return "medium";
    case SizeBand::large: return "large";
    case SizeBand::extra_large: return "extra-large";
  }
  return "unknown";
}

}  // namespace dyncoup
