#include "corefonto/ontology.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corefonto/error.hpp"
#include "corefonto/random.hpp"

namespace corefonto {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::vector<std::uint32_t>> out_lists(const Ontology& onto) {
  std::vector<std::vector<std::uint32_t>> out(onto.concepts.size());
  for (const auto& [p, c] : onto.edges) out[p].push_back(c);
  return out;
}

std::string describe_cycle(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += n + " -> ";
  return s + names.front();
}

// A directed cycle in the concept graph, as concept indices; empty if none.
std::vector<std::uint32_t> find_cycle(const Ontology& onto) {
  const auto out = out_lists(onto);
  const std::size_t n = out.size();
  std::vector<std::uint8_t> color(n, 0);
  std::vector<std::uint32_t> parent(n, 0);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (color[s]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{s, 0}};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i == out[v].size()) {
        color[v] = 2;
        stack.pop_back();
        continue;
      }
      const auto w = out[v][i++];
      if (color[w] == 1) {
        std::vector<std::uint32_t> cycle{w};
        for (auto x = v; x != w; x = parent[x]) cycle.push_back(x);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (color[w] == 0) {
        color[w] = 1;
        parent[w] = v;
        stack.push_back({w, 0});
      }
    }
  }
  return {};
}

}  // namespace

std::string concept_id(const std::vector<std::string>& sorted_aliases) {
  std::uint64_t h = fnv1a64("");
  for (const auto& a : sorted_aliases) {
    h = fnv1a64(a, h);
    h = fnv1a64(std::string_view("\x1f", 1), h);
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "c%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ConceptAssignment collapse_identity(const LabeledGraph& labels) {
  ConceptAssignment out;
  out.components = identity_components(labels);
  out.aliases.reserve(out.components.members.size());
  for (const auto& members : out.components.members) {
    std::vector<std::string> names;
    names.reserve(members.size());
    for (NodeId v : members) names.push_back(labels.node(v).phrase);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    out.aliases.push_back(std::move(names));
  }
  return out;
}

Ontology lift_hierarchy(const LabeledGraph& labels, const ConceptAssignment& concepts,
                        LiftReport* report) {
  LiftReport local;
  const auto& comps = concepts.components;
  Ontology onto;

  // Identical alias sets (two copies of a split name left on their own) get
  // numbered suffixes in component order.
  std::map<std::string, int> seen;
  onto.concepts.reserve(concepts.aliases.size());
  for (const auto& aliases : concepts.aliases) {
    std::string id = concept_id(aliases);
    const int k = ++seen[id];
    if (k > 1) id += "-" + std::to_string(k);
    onto.concepts.push_back({std::move(id), aliases});
  }

  for (const auto& e : labels.edges()) {
    if (e.kind != EdgeKind::Hierarchy) continue;
    ++local.node_edges;
    const auto a = comps.of_node[e.parent];
    const auto b = comps.of_node[e.child];
    if (a == b) {
      ++local.internal_dropped;
      local.warnings.push_back("hierarchy edge " + labels.node(e.parent).phrase + " -> " +
                               labels.node(e.child).phrase + " lies inside one concept; dropped");
      continue;
    }
    onto.edges.push_back({a, b});
  }
  onto = canonicalize(std::move(onto));
  local.concept_edges = onto.edges.size();

  if (const auto cycle = find_cycle(onto); !cycle.empty()) {
    std::vector<std::string> names;
    for (auto c : cycle) names.push_back(onto.concepts[c].aliases.front());
    throw InvariantError("concept hierarchy has a cycle: " + describe_cycle(names));
  }
  if (report) *report = std::move(local);
  return onto;
}

Ontology build_ontology(const LabeledGraph& labels, LiftReport* report) {
  return lift_hierarchy(labels, collapse_identity(labels), report);
}

Ontology canonicalize(Ontology onto) {
  std::vector<std::uint32_t> order(onto.concepts.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return onto.concepts[a].id < onto.concepts[b].id;
  });
  std::vector<std::uint32_t> rank(order.size());
  Ontology out;
  out.concepts.reserve(order.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = r;
    out.concepts.push_back(std::move(onto.concepts[order[r]]));
  }
  for (auto [p, c] : onto.edges) out.edges.push_back({rank[p], rank[c]});
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

void validate(const Ontology& onto) {
  for (std::size_t i = 0; i < onto.concepts.size(); ++i) {
    const auto& c = onto.concepts[i];
    if (c.id.empty()) throw InvariantError("concept with an empty id");
    if (c.aliases.empty()) throw InvariantError("concept " + c.id + " has no aliases");
    for (std::size_t j = 0; j < c.aliases.size(); ++j) {
      if (c.aliases[j].empty()) throw InvariantError("concept " + c.id + " has an empty alias");
      if (j > 0 && !(c.aliases[j - 1] < c.aliases[j])) {
        throw InvariantError("aliases of concept " + c.id + " are not sorted and unique");
      }
    }
    if (i > 0 && !(onto.concepts[i - 1].id < c.id)) {
      throw InvariantError("concept ids are not sorted and unique at " + c.id);
    }
  }
  for (std::size_t i = 0; i < onto.edges.size(); ++i) {
    const auto [p, c] = onto.edges[i];
    if (p >= onto.concepts.size() || c >= onto.concepts.size()) {
      throw InvariantError("ontology edge refers to a missing concept");
    }
    if (p == c) throw InvariantError("ontology self-edge on " + onto.concepts[p].id);
    if (i > 0 && !(onto.edges[i - 1] < onto.edges[i])) {
      throw InvariantError("ontology edges are not sorted and unique");
    }
  }
  if (const auto cycle = find_cycle(onto); !cycle.empty()) {
    std::vector<std::string> names;
    for (auto c : cycle) names.push_back(onto.concepts[c].id);
    throw InvariantError("ontology has a cycle: " + describe_cycle(names));
  }
}

std::vector<std::uint32_t> topological_order(const Ontology& onto) {
  const auto out = out_lists(onto);
  std::vector<std::size_t> indegree(out.size(), 0);
  for (const auto& [p, c] : onto.edges) ++indegree[c];
  std::vector<std::uint32_t> order;
  order.reserve(out.size());
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (auto w : out[order[head]]) {
      if (--indegree[w] == 0) order.push_back(w);
    }
  }
  if (order.size() != out.size()) return {};
  return order;
}

Ontology transitive_reduction(const Ontology& onto) {
  const auto order = topological_order(onto);
  if (order.size() != onto.concepts.size()) {
    throw InvariantError("transitive reduction needs an acyclic ontology");
  }
  const std::size_t n = onto.concepts.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> reach(n * words, 0);
  const auto out = out_lists(onto);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    for (auto w : out[v]) {
      reach[v * words + w / 64] |= 1ULL << (w % 64);
      for (std::size_t k = 0; k < words; ++k) reach[v * words + k] |= reach[w * words + k];
    }
  }
  Ontology reduced;
  reduced.concepts = onto.concepts;
  for (const auto& [p, c] : onto.edges) {
    const bool implied = std::any_of(out[p].begin(), out[p].end(), [&](std::uint32_t w) {
      return w != c && (reach[w * words + c / 64] >> (c % 64) & 1ULL);
    });
    if (!implied) reduced.edges.push_back({p, c});
  }
  return reduced;
}

void write_ontology(const Ontology& onto, ExportFormat format, std::ostream& out) {
  if (format == ExportFormat::edge_tsv) {
    for (const auto& [p, c] : onto.edges) {
      for (const auto& pa : onto.concepts[p].aliases) {
        for (const auto& ca : onto.concepts[c].aliases) out << pa << '\t' << ca << '\n';
      }
    }
    return;
  }
  ordered_json doc;
  doc["concepts"] = ordered_json::array();
  for (const auto& c : onto.concepts) {
    ordered_json item;
    item["id"] = c.id;
    item["aliases"] = c.aliases;
    doc["concepts"].push_back(std::move(item));
  }
  doc["edges"] = ordered_json::array();
  for (const auto& [p, c] : onto.edges) {
    doc["edges"].push_back({onto.concepts[p].id, onto.concepts[c].id});
  }
  out << doc.dump(2) << '\n';
}

void export_ontology(const Ontology& onto, ExportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write ontology " + path.string());
  write_ontology(onto, format, out);
  if (!out) throw DataError("failed writing ontology " + path.string());
}

Ontology read_ontology_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ontology JSON: ") + e.what());
  }
  Ontology onto;
  try {
    std::map<std::string, std::uint32_t> index;
    for (const auto& item : doc.at("concepts")) {
      Concept c{item.at("id").get<std::string>(),
                item.at("aliases").get<std::vector<std::string>>()};
      std::sort(c.aliases.begin(), c.aliases.end());
      if (!index.emplace(c.id, static_cast<std::uint32_t>(onto.concepts.size())).second) {
        throw DataError("ontology JSON: duplicate concept id " + c.id);
      }
      onto.concepts.push_back(std::move(c));
    }
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) throw DataError("ontology JSON: bad edge entry");
      auto p = index.find(pair[0].get<std::string>());
      auto c = index.find(pair[1].get<std::string>());
      if (p == index.end() || c == index.end()) {
        throw DataError("ontology JSON: edge refers to an unknown concept");
      }
      onto.edges.push_back({p->second, c->second});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ontology JSON: ") + e.what());
  }
  onto = canonicalize(std::move(onto));
  try {
    validate(onto);
  } catch (const InvariantError& e) {
    throw DataError(std::string("ontology JSON: ") + e.what());
  }
  return onto;
}

Ontology import_ontology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read ontology " + path.string());
  return read_ontology_json(in);
}

}  // namespace corefonto
