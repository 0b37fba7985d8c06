#include "corefonto/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "corefonto/error.hpp"

namespace corefonto {

Reachability::Reachability(std::size_t n,
                           std::span<const std::pair<std::uint32_t, std::uint32_t>> edges)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {
  std::vector<std::vector<std::uint32_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw DataError("reachability edge out of range");
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (auto w : out[order[head]]) {
      if (--indegree[w] == 0) order.push_back(w);
    }
  }
  if (order.size() != n) throw DataError("hierarchy contains a directed cycle");
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    std::uint64_t* row = &bits_[v * words_];
    for (auto w : out[v]) {
      row[w / 64] |= 1ULL << (w % 64);
      const std::uint64_t* sub = &bits_[w * words_];
      for (std::size_t k = 0; k < words_; ++k) row[k] |= sub[k];
    }
  }
}

std::optional<std::uint32_t> ReferenceOntology::find(std::string_view s) const {
  auto it = std::lower_bound(strings.begin(), strings.end(), s);
  if (it == strings.end() || *it != s) return std::nullopt;
  return static_cast<std::uint32_t>(it - strings.begin());
}

ReferenceOntology make_reference(std::span<const std::pair<std::string, std::string>> child_parent,
                                 std::span<const std::vector<std::string>> alias_groups,
                                 const StopLists& lists, std::vector<std::string>* warnings) {
  std::unordered_map<std::string, std::optional<std::string>> cache;
  auto norm = [&](const std::string& raw) -> const std::optional<std::string>& {
    auto it = cache.find(raw);
    if (it == cache.end()) it = cache.emplace(raw, normalize_phrase(raw, lists)).first;
    return it->second;
  };
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  std::set<std::pair<std::string, std::string>> edges;  // (parent, child)
  std::size_t dropped_edges = 0;
  for (const auto& [child, parent] : child_parent) {
    const auto& c = norm(child);
    const auto& p = norm(parent);
    if (!c || !p || *c == *p) {
      ++dropped_edges;
      continue;
    }
    edges.insert({*p, *c});
  }
  if (dropped_edges) {
    warn(std::to_string(dropped_edges) + " reference edge(s) dropped by normalization");
  }
  std::vector<std::vector<std::string>> groups;
  for (const auto& group : alias_groups) {
    std::set<std::string> members;
    for (const auto& raw : group) {
      if (const auto& s = norm(raw)) members.insert(*s);
    }
    if (!members.empty()) groups.emplace_back(members.begin(), members.end());
  }

  ReferenceOntology ref;
  std::set<std::string> strings;
  for (const auto& [p, c] : edges) {
    strings.insert(p);
    strings.insert(c);
  }
  for (const auto& g : groups) strings.insert(g.begin(), g.end());
  ref.strings.assign(strings.begin(), strings.end());
  for (const auto& [p, c] : edges) ref.edges.push_back({*ref.find(p), *ref.find(c)});

  std::vector<bool> grouped(ref.strings.size(), false);
  for (const auto& g : groups) {
    std::vector<std::uint32_t> ids;
    for (const auto& s : g) {
      const auto id = *ref.find(s);
      if (grouped[id]) throw DataError("reference alias groups overlap on '" + s + "'");
      grouped[id] = true;
      ids.push_back(id);
    }
    ref.alias_groups.push_back(std::move(ids));
  }
  ref.reach = Reachability(ref.strings.size(), ref.edges);
  return ref;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

ReferenceOntology load_reference(const std::filesystem::path& hierarchy,
                                 const std::filesystem::path& aliases, const StopLists& lists,
                                 std::vector<std::string>* warnings) {
  std::vector<std::pair<std::string, std::string>> edges;
  {
    std::ifstream in(hierarchy);
    if (!in) throw DataError("cannot read reference hierarchy " + hierarchy.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(std::move(line));
      if (line.empty() || line.front() == '#') continue;
      auto fields = split_tabs(line);
      if (fields.size() != 2) {
        throw DataError(hierarchy.string() + ":" + std::to_string(line_no) +
                        ": expected 'child<TAB>parent'");
      }
      edges.push_back({std::move(fields[0]), std::move(fields[1])});
    }
  }
  std::vector<std::vector<std::string>> groups;
  if (!aliases.empty()) {
    std::ifstream in(aliases);
    if (!in) throw DataError("cannot read reference aliases " + aliases.string());
    std::string line;
    while (std::getline(in, line)) {
      line = strip_cr(std::move(line));
      if (line.empty() || line.front() == '#') continue;
      groups.push_back(split_tabs(line));
    }
  }
  return make_reference(edges, groups, lists, warnings);
}

namespace {

using ConceptsOf = std::unordered_map<std::string, std::vector<std::uint32_t>>;

ConceptsOf concepts_of(const Ontology& ours) {
  ConceptsOf out;
  for (std::uint32_t c = 0; c < ours.concepts.size(); ++c) {
    for (const auto& a : ours.concepts[c].aliases) out[a].push_back(c);
  }
  return out;
}

bool is_shared(std::span<const std::string> shared, const std::string& s) {
  return std::binary_search(shared.begin(), shared.end(), s);
}

// Predicted (parent, child) pairs as reference string ids.
std::set<std::pair<std::uint32_t, std::uint32_t>> predicted_pairs(
    const Ontology& ours, const ReferenceOntology& ref, std::span<const std::string> shared) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& [p, c] : ours.edges) {
    for (const auto& pa : ours.concepts[p].aliases) {
      if (!is_shared(shared, pa)) continue;
      const auto pid = *ref.find(pa);
      for (const auto& ca : ours.concepts[c].aliases) {
        if (ca == pa || !is_shared(shared, ca)) continue;
        out.insert({pid, *ref.find(ca)});
      }
    }
  }
  return out;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

double choose2(double x) { return 0.5 * x * (x - 1.0); }

}  // namespace

std::vector<std::string> shared_vocabulary(const Ontology& ours, const ReferenceOntology& ref) {
  std::set<std::string> out;
  for (const auto& c : ours.concepts) {
    for (const auto& a : c.aliases) {
      if (ref.find(a)) out.insert(a);
    }
  }
  return {out.begin(), out.end()};
}

HierarchyScores hierarchy_pr(const Ontology& ours, const ReferenceOntology& ref,
                             std::span<const std::string> shared) {
  HierarchyScores s;
  for (const auto& [p, c] : predicted_pairs(ours, ref, shared)) {
    ++s.predicted;
    if (ref.reach.reaches(p, c)) ++s.correct;
  }
  const auto owners = concepts_of(ours);
  const Reachability ours_reach(ours.concepts.size(), ours.edges);
  for (const auto& [p, c] : ref.edges) {
    const auto& ps = ref.strings[p];
    const auto& cs = ref.strings[c];
    if (!is_shared(shared, ps) || !is_shared(shared, cs)) continue;
    ++s.reference_edges;
    const auto& from = owners.at(ps);
    const auto& to = owners.at(cs);
    const bool found = std::any_of(from.begin(), from.end(), [&](std::uint32_t a) {
      return std::any_of(to.begin(), to.end(),
                         [&](std::uint32_t b) { return a != b && ours_reach.reaches(a, b); });
    });
    if (found) ++s.recalled;
  }
  s.precision = ratio(s.correct, s.predicted);
  s.recall = ratio(s.recalled, s.reference_edges);
  if (s.precision && s.recall && *s.precision + *s.recall > 0.0) {
    s.f1 = 2.0 * *s.precision * *s.recall / (*s.precision + *s.recall);
  } else if (s.precision && s.recall) {
    s.f1 = 0.0;
  }
  return s;
}

DirectionScores direction_consistency(const Ontology& ours, const ReferenceOntology& ref,
                                      std::span<const std::string> shared) {
  DirectionScores s;
  for (const auto& [p, c] : predicted_pairs(ours, ref, shared)) {
    const bool forward = ref.reach.reaches(p, c);
    if (!forward && !ref.reach.reaches(c, p)) continue;
    ++s.eligible;
    if (forward) ++s.consistent;
  }
  s.consistency = ratio(s.consistent, s.eligible);
  return s;
}

double cluster_entropy(std::span<const std::uint32_t> predicted,
                       std::span<const std::uint32_t> gold) {
  if (predicted.size() != gold.size()) throw UsageError("cluster_entropy: length mismatch");
  if (predicted.empty()) return 0.0;
  std::map<std::uint32_t, std::map<std::uint32_t, std::size_t>> table;
  for (std::size_t i = 0; i < predicted.size(); ++i) ++table[predicted[i]][gold[i]];
  const double n = static_cast<double>(predicted.size());
  double h = 0.0;
  for (const auto& [cluster, row] : table) {
    double size = 0.0;
    for (const auto& [g, count] : row) size += static_cast<double>(count);
    double hk = 0.0;
    for (const auto& [g, count] : row) {
      const double p = static_cast<double>(count) / size;
      hk -= p * std::log(p);
    }
    h += size / n * hk;
  }
  return h;
}

double adjusted_rand_index(std::span<const std::uint32_t> predicted,
                           std::span<const std::uint32_t> gold) {
  if (predicted.size() != gold.size()) throw UsageError("adjusted_rand_index: length mismatch");
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> cells;
  std::map<std::uint32_t, std::size_t> rows, cols;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    ++cells[{predicted[i], gold[i]}];
    ++rows[predicted[i]];
    ++cols[gold[i]];
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [k, v] : cells) index += choose2(static_cast<double>(v));
  for (const auto& [k, v] : rows) sum_rows += choose2(static_cast<double>(v));
  for (const auto& [k, v] : cols) sum_cols += choose2(static_cast<double>(v));
  const double pairs = choose2(static_cast<double>(predicted.size()));
  const double expected = pairs > 0.0 ? sum_rows * sum_cols / pairs : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) {
    // Both partitions are all-singletons or a single block; identical
    // partitions agree perfectly.
    return cells.size() == rows.size() && cells.size() == cols.size() ? 1.0 : 0.0;
  }
  return (index - expected) / (max_index - expected);
}

ClusterScores alias_clustering_scores(const Ontology& ours, const ReferenceOntology& ref,
                                      std::span<const std::string> shared) {
  ClusterScores s;
  s.strings = shared.size();
  if (shared.size() < 2) return s;
  const auto owners = concepts_of(ours);
  std::vector<std::uint32_t> gold_of(ref.strings.size(), UINT32_MAX);
  for (std::uint32_t g = 0; g < ref.alias_groups.size(); ++g) {
    for (auto id : ref.alias_groups[g]) gold_of[id] = g;
  }
  auto next_gold = static_cast<std::uint32_t>(ref.alias_groups.size());
  std::vector<std::uint32_t> predicted, gold;
  predicted.reserve(shared.size());
  gold.reserve(shared.size());
  for (const auto& str : shared) {
    const auto& cs = owners.at(str);
    std::uint32_t best = cs.front();
    for (auto c : cs) {
      const auto size_c = ours.concepts[c].aliases.size();
      const auto size_b = ours.concepts[best].aliases.size();
      if (size_c > size_b || (size_c == size_b && c < best)) best = c;
    }
    predicted.push_back(best);
    const auto g = gold_of[*ref.find(str)];
    gold.push_back(g == UINT32_MAX ? next_gold++ : g);
  }
  s.predicted_clusters = std::set<std::uint32_t>(predicted.begin(), predicted.end()).size();
  s.gold_clusters = std::set<std::uint32_t>(gold.begin(), gold.end()).size();
  s.entropy = cluster_entropy(predicted, gold);
  s.ari = adjusted_rand_index(predicted, gold);
  return s;
}

EvalReport evaluate(const Ontology& ours, const ReferenceOntology& ref) {
  EvalReport r;
  std::set<std::string> our_strings;
  for (const auto& c : ours.concepts) our_strings.insert(c.aliases.begin(), c.aliases.end());
  r.our_strings = our_strings.size();
  r.reference_strings = ref.strings.size();
  const auto shared = shared_vocabulary(ours, ref);
  r.shared_strings = shared.size();
  if (shared.empty()) {
    throw DataError("no strings are shared between the ontology and the reference; nothing to evaluate");
  }
  r.hierarchy = hierarchy_pr(ours, ref, shared);
  r.direction = direction_consistency(ours, ref, shared);
  r.clustering = alias_clustering_scores(ours, ref, shared);
  return r;
}

namespace {

nlohmann::ordered_json opt(const std::optional<double>& x) {
  return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
}

std::string fmt(const std::optional<double>& x) {
  if (!x) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *x);
  return buf;
}

}  // namespace

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["vocabulary"] = {{"ours", our_strings}, {"reference", reference_strings}, {"shared", shared_strings}};
  j["hierarchy"] = {{"precision", opt(hierarchy.precision)},
                    {"recall", opt(hierarchy.recall)},
                    {"f1", opt(hierarchy.f1)},
                    {"predicted_edges", hierarchy.predicted},
                    {"correct_edges", hierarchy.correct},
                    {"reference_edges", hierarchy.reference_edges},
                    {"recalled_edges", hierarchy.recalled}};
  j["direction"] = {{"consistency", opt(direction.consistency)},
                    {"eligible_edges", direction.eligible},
                    {"consistent_edges", direction.consistent}};
  j["aliases"] = {{"entropy", opt(clustering.entropy)},
                  {"ari", opt(clustering.ari)},
                  {"strings", clustering.strings},
                  {"predicted_clusters", clustering.predicted_clusters},
                  {"gold_clusters", clustering.gold_clusters}};
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  char line[128];
  auto row = [&](const char* name, const std::string& value, const std::string& detail) {
    std::snprintf(line, sizeof line, "%-24s %10s  %s\n", name, value.c_str(), detail.c_str());
    out << line;
  };
  row("shared strings", std::to_string(shared_strings),
      "(ours " + std::to_string(our_strings) + ", reference " + std::to_string(reference_strings) + ")");
  row("hierarchy precision", fmt(hierarchy.precision),
      std::to_string(hierarchy.correct) + " / " + std::to_string(hierarchy.predicted));
  row("hierarchy recall", fmt(hierarchy.recall),
      std::to_string(hierarchy.recalled) + " / " + std::to_string(hierarchy.reference_edges));
  row("hierarchy F1", fmt(hierarchy.f1), "");
  row("direction consistency", fmt(direction.consistency),
      std::to_string(direction.consistent) + " / " + std::to_string(direction.eligible));
  row("alias entropy", fmt(clustering.entropy),
      std::to_string(clustering.predicted_clusters) + " predicted clusters");
  row("alias ARI", fmt(clustering.ari), std::to_string(clustering.gold_clusters) + " gold clusters");
  return out.str();
}

}  // namespace corefonto
