#include "corefonto/sense_resolver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "corefonto/error.hpp"

namespace corefonto {

void EmbeddingTable::add(std::string phrase, std::vector<double> vec) {
  if (phrase.empty()) throw DataError("embedding for an empty phrase");
  if (vec.size() != dim_) {
    throw DataError("embedding for '" + phrase + "' has dimension " + std::to_string(vec.size()) +
                    ", expected " + std::to_string(dim_));
  }
  for (double x : vec) {
    if (!std::isfinite(x)) throw DataError("embedding for '" + phrase + "' is not finite");
  }
  auto [it, inserted] = rows_.try_emplace(phrase, std::move(vec));
  if (!inserted) throw DataError("duplicate embedding for '" + phrase + "'");
  order_.push_back(std::move(phrase));
}

const std::vector<double>* EmbeddingTable::find(std::string_view phrase) const {
  auto it = rows_.find(std::string(phrase));
  return it == rows_.end() ? nullptr : &it->second;
}

void EmbeddingTable::write(std::ostream& out) const {
  out << dim_ << '\n';
  char buf[40];
  for (const auto& phrase : order_) {
    out << phrase << '\t';
    const auto& vec = rows_.at(phrase);
    for (std::size_t i = 0; i < vec.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", vec[i]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("embeddings file is empty");
  std::size_t dim = 0;
  {
    const char* end = line.data() + line.size();
    auto [p, ec] = std::from_chars(line.data(), end, dim);
    if (ec != std::errc() || p != end || dim == 0) {
      throw DataError("embeddings file: first line must hold the dimension");
    }
  }
  EmbeddingTable table(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("embeddings line " + std::to_string(line_no) + ": missing tab");
    }
    std::vector<double> vec;
    vec.reserve(dim);
    const char* p = line.c_str() + tab + 1;
    for (;;) {
      char* end = nullptr;
      const double x = std::strtod(p, &end);
      if (end == p) break;
      vec.push_back(x);
      p = end;
    }
    while (*p == ' ' || *p == '\r') ++p;
    if (*p != '\0') {
      throw DataError("embeddings line " + std::to_string(line_no) + ": bad number");
    }
    try {
      table.add(line.substr(0, tab), std::move(vec));
    } catch (const DataError& e) {
      throw DataError("embeddings line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write embeddings " + path.string());
  write(out);
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read embeddings " + path.string());
  return read(in);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<SenseSplitTask> select_tasks(const LabeledGraph& labels, std::size_t knn) {
  std::vector<SenseSplitTask> tasks;
  for (NodeId n = 0; n < labels.node_count(); ++n) {
    if (!labels.node(n).is_name) continue;
    auto children = labels.children(n);
    if (children.empty()) continue;
    tasks.push_back({n, std::move(children), knn});
  }
  return tasks;
}

std::optional<SimpleGraph> build_knn_subgraph(const LabeledGraph& labels,
                                              const SenseSplitTask& task,
                                              const EmbeddingTable& emb, bool weighted) {
  std::vector<const std::vector<double>*> vecs;
  vecs.push_back(emb.find(labels.node(task.n).phrase));
  for (NodeId c : task.children) vecs.push_back(emb.find(labels.node(c).phrase));
  if (std::find(vecs.begin(), vecs.end(), nullptr) != vecs.end()) return std::nullopt;

  const std::size_t size = vecs.size();
  std::vector<double> sim(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      sim[i * size + j] = sim[j * size + i] = cosine_similarity(*vecs[i], *vecs[j]);
    }
  }
  const std::size_t k = std::min(task.knn, size - 1);
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::uint32_t> others;
  for (std::uint32_t i = 0; i < size; ++i) {
    others.clear();
    for (std::uint32_t j = 0; j < size; ++j) {
      if (j != i) others.push_back(j);
    }
    std::stable_sort(others.begin(), others.end(), [&](std::uint32_t a, std::uint32_t b) {
      return sim[i * size + a] > sim[i * size + b];
    });
    for (std::size_t r = 0; r < k; ++r) {
      pairs.insert({std::min(i, others[r]), std::max(i, others[r])});
    }
  }
  SimpleGraph g;
  g.n = size;
  for (const auto& [a, b] : pairs) {
    g.edges.push_back({a, b, weighted ? 0.5 * (1.0 + sim[a * size + b]) : 1.0});
  }
  return g;
}

SplitOutcome apply_split(LabeledGraph& labels, const SenseSplitTask& task,
                         std::span<const std::uint32_t> communities) {
  if (communities.size() != task.children.size() + 1) {
    throw InvariantError("community assignment does not cover the task");
  }
  const NodeId n = task.n;
  std::map<NodeId, std::vector<EdgeId>> child_edges;
  std::vector<EdgeId> parent_edges;
  for (EdgeId e : labels.incident(n)) {
    const auto& edge = labels.edge(e);
    if (edge.kind != EdgeKind::Hierarchy) continue;
    if (edge.parent == n) child_edges[edge.child].push_back(e);
    if (edge.child == n) parent_edges.push_back(e);
  }

  SplitOutcome out;
  const std::set<std::uint32_t> ids(communities.begin(), communities.end());
  out.communities = ids.size();
  const std::uint32_t home = communities[0];

  std::map<std::uint32_t, NodeId> node_of;
  node_of[home] = n;
  for (std::uint32_t c : ids) {
    if (c == home) continue;
    LabeledNode copy = labels.node(n);
    node_of[c] = labels.add_node(std::move(copy));
    out.new_nodes.push_back(node_of[c]);
  }

  std::map<std::uint32_t, std::vector<NodeId>> members;
  for (std::size_t i = 0; i < task.children.size(); ++i) {
    const NodeId c = task.children[i];
    const std::uint32_t comm = communities[i + 1];
    members[comm].push_back(c);
    auto it = child_edges.find(c);
    if (it == child_edges.end()) continue;
    for (EdgeId e : it->second) {
      if (node_of[comm] != n) {
        labels.reattach(e, n, node_of[comm]);
        ++out.moved_edges;
      }
      labels.set_identity(e);
      ++out.relabeled_identity;
    }
  }
  if (out.communities == 1) return out;

  for (EdgeId e : parent_edges) {
    const NodeId p = labels.edge(e).parent;
    std::vector<std::uint32_t> targets;
    for (const auto& [comm, kids] : members) {
      const bool shared = std::any_of(kids.begin(), kids.end(), [&](NodeId c) {
        const auto ps = labels.parents(c);
        return std::binary_search(ps.begin(), ps.end(), p);
      });
      if (shared) targets.push_back(comm);
    }
    if (targets.empty()) continue;
    auto home_it = std::find(targets.begin(), targets.end(), home);
    if (home_it != targets.end()) {
      targets.erase(home_it);
    } else {
      labels.reattach(e, n, node_of[targets.front()]);
      ++out.moved_edges;
      targets.erase(targets.begin());
    }
    for (std::uint32_t comm : targets) {
      LabeledEdge dup = labels.edge(e);
      dup.u = p;
      dup.v = node_of[comm];
      dup.parent = p;
      dup.child = node_of[comm];
      labels.add_edge(dup);
      ++out.duplicated_edges;
    }
  }
  return out;
}

SenseReport resolve_senses(LabeledGraph& labels, const EmbeddingTable& emb,
                           const SenseOptions& options) {
  SenseReport report;
  for (NodeId n = 0; n < labels.node_count(); ++n) {
    if (!labels.node(n).is_name) continue;
    SenseSplitTask task{n, labels.children(n), options.knn};
    if (task.children.empty()) continue;
    ++report.tasks;
    const auto sub = build_knn_subgraph(labels, task, emb, options.weighted);
    if (!sub) {
      ++report.skipped_missing_embedding;
      report.warnings.push_back("sense task for '" + labels.node(n).phrase +
                                "' skipped: missing embedding");
      continue;
    }
    const LouvainResult communities = louvain(*sub);
    const SplitOutcome outcome = apply_split(labels, task, communities.community);
    if (outcome.communities == 1) {
      ++report.merged;
    } else {
      ++report.split;
    }
    report.new_nodes += outcome.new_nodes.size();
    report.relabeled_identity += outcome.relabeled_identity;
    report.duplicated_edges += outcome.duplicated_edges;
    if (outcome.duplicated_edges > 0) {
      report.warnings.push_back("split of '" + labels.node(n).phrase + "' duplicated " +
                                std::to_string(outcome.duplicated_edges) + " parent edge(s)");
    }
  }
  return report;
}

}  // namespace corefonto
