#include "corefonto/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "corefonto/error.hpp"

namespace corefonto {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view value) {
  T out{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw UsageError("config '" + std::string(key) + "': expected a non-negative integer, got '" +
                     std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  std::string s(value);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw UsageError("config '" + std::string(key) + "': expected a number, got '" + s + "'");
  }
  return x;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw UsageError("config '" + std::string(key) + "': expected a boolean, got '" +
                   std::string(value) + "'");
}

std::string real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "chains") chains = std::string(value);
  else if (key == "embeddings") embeddings = std::string(value);
  else if (key == "stoplists") stoplists = std::string(value);
  else if (key == "reference_hierarchy") reference_hierarchy = std::string(value);
  else if (key == "reference_aliases") reference_aliases = std::string(value);
  else if (key == "work_dir") work_dir = std::string(value);
  else if (key == "pivots") pivots = parse_unsigned<std::uint32_t>(key, value);
  else if (key == "exact") exact = parse_bool(key, value);
  else if (key == "knn") knn = parse_unsigned<std::size_t>(key, value);
  else if (key == "knn_weighted") knn_weighted = parse_bool(key, value);
  else if (key == "name_threshold") name_threshold = parse_real(key, value);
  else if (key == "pmi_threshold") pmi_threshold = parse_real(key, value);
  else if (key == "seed") seed = parse_unsigned<std::uint64_t>(key, value);
  else if (key == "threads") threads = parse_unsigned<unsigned>(key, value);
  else if (key == "senses") senses = parse_bool(key, value);
  else if (key == "noise") noise = parse_bool(key, value);
  else if (key == "reduce") reduce = parse_bool(key, value);
  else throw UsageError("unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::validate() const {
  if (pivots < 1) throw UsageError("pivots must be at least 1");
  if (knn < 1) throw UsageError("knn must be at least 1");
  if (!(name_threshold > 0.0 && name_threshold <= 1.0)) {
    throw UsageError("name_threshold must lie in (0, 1]");
  }
  if (threads < 1 || threads > 1024) throw UsageError("threads must lie in [1, 1024]");
  if (work_dir.empty()) throw UsageError("work_dir must not be empty");
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  return {
      {"chains", chains.string()},
      {"embeddings", embeddings.string()},
      {"stoplists", stoplists.string()},
      {"reference_hierarchy", reference_hierarchy.string()},
      {"reference_aliases", reference_aliases.string()},
      {"work_dir", work_dir.string()},
      {"pivots", std::to_string(pivots)},
      {"exact", exact ? "true" : "false"},
      {"knn", std::to_string(knn)},
      {"knn_weighted", knn_weighted ? "true" : "false"},
      {"name_threshold", real(name_threshold)},
      {"pmi_threshold", real(pmi_threshold)},
      {"seed", seed ? std::to_string(*seed) : ""},
      {"threads", std::to_string(threads)},
      {"senses", senses ? "true" : "false"},
      {"noise", noise ? "true" : "false"},
      {"reduce", reduce ? "true" : "false"},
  };
}

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    // Empty values leave the default in place.
    if (value.empty()) continue;
    try {
      cfg.set(key, value);
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  return parse(in);
}

void write_config(const PipelineConfig& cfg, std::ostream& out) {
  for (const auto& [k, v] : cfg.entries()) out << k << " = " << v << '\n';
}

}  // namespace corefonto
