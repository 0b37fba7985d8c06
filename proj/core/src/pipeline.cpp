#include "corefonto/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corefonto/centrality.hpp"
#include "corefonto/chain_ingest.hpp"
#include "corefonto/coref_graph.hpp"
#include "corefonto/edge_classifier.hpp"
#include "corefonto/error.hpp"
#include "corefonto/evaluator.hpp"
#include "corefonto/labels.hpp"
#include "corefonto/random.hpp"
#include "corefonto/sense_resolver.hpp"

namespace corefonto {
namespace {

constexpr std::size_t kMaxReportedIssues = 50;

using ordered_json = nlohmann::ordered_json;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string() + " (has the previous stage run?)");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

StopLists stop_lists(const PipelineConfig& cfg) {
  return cfg.stoplists.empty() ? StopLists::defaults() : StopLists::load(cfg.stoplists);
}

WorkPaths work(const PipelineConfig& cfg) {
  std::filesystem::create_directories(cfg.work_dir);
  return {cfg.work_dir};
}

void finish(const PipelineConfig& cfg, const WorkPaths& paths, StageReport& report) {
  auto out = open_out(paths.report(report.stage));
  out << report.to_json(cfg) << '\n';
}

template <typename Body>
StageReport guarded(const PipelineConfig& cfg, const std::string& stage, Body&& body) {
  const std::string where = "stage '" + stage + "' (work dir " + cfg.work_dir.string() + "): ";
  try {
    cfg.validate();
    return body();
  } catch (const UsageError& e) {
    throw UsageError(where + e.what());
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(where + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    throw DataError(where + e.what());
  }
}

std::int64_t count(std::size_t x) { return static_cast<std::int64_t>(x); }

}  // namespace

std::string StageReport::to_json(const PipelineConfig& cfg) const {
  ordered_json j;
  j["stage"] = stage;
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : cfg.entries()) config[k] = v;
  j["config"] = std::move(config);
  ordered_json c = ordered_json::object();
  for (const auto& [k, v] : counts) {
    std::visit([&](const auto& x) { c[k] = x; }, v);
  }
  j["counts"] = std::move(c);
  j["warnings"] = warnings;
  ordered_json files = ordered_json::array();
  for (const auto& a : artifacts) files.push_back(a.string());
  j["artifacts"] = std::move(files);
  return j.dump(2);
}

StageReport stage_ingest(const PipelineConfig& cfg) {
  return guarded(cfg, "ingest", [&] {
    if (cfg.chains.empty()) throw UsageError("no chains file configured");
    const auto paths = work(cfg);
    const StopLists lists = stop_lists(cfg);
    ChainReader reader(cfg.chains);
    Ingestor ingestor(lists);
    while (auto record = reader.next()) ingestor.add(*record);
    const IngestResult result = std::move(ingestor).finish();
    {
      auto out = open_out(paths.phrases());
      write_phrase_table(result.phrases, out);
    }
    {
      auto out = open_out(paths.chains());
      write_normalized_chains(result.chains, out);
    }
    const ParseSummary& parse = reader.summary();
    StageReport r{"ingest"};
    r.add("lines", count(parse.lines));
    r.add("records_read", count(parse.records_read));
    r.add("records_skipped", count(parse.records_skipped));
    r.add("short_chains_dropped", count(parse.short_chains_dropped));
    r.add("chains_in", count(result.summary.chains_in));
    r.add("chains_kept", count(result.summary.chains_kept));
    r.add("chains_dropped", count(result.summary.chains_dropped));
    r.add("mentions_in", count(result.summary.mentions_in));
    r.add("mentions_filtered", count(result.summary.mentions_filtered));
    r.add("duplicate_mentions", count(result.summary.duplicate_mentions));
    r.add("phrases", count(result.phrases.size()));
    for (std::size_t i = 0; i < parse.issues.size() && i < kMaxReportedIssues; ++i) {
      r.warnings.push_back("line " + std::to_string(parse.issues[i].line) + ": " +
                           parse.issues[i].message);
    }
    if (parse.issues.size() > kMaxReportedIssues) {
      r.warnings.push_back(std::to_string(parse.issues.size() - kMaxReportedIssues) +
                           " more malformed line(s)");
    }
    r.artifacts = {paths.phrases(), paths.chains()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_graph(const PipelineConfig& cfg) {
  return guarded(cfg, "graph", [&] {
    const auto paths = work(cfg);
    auto in = open_in(paths.chains());
    const auto chains = read_normalized_chains(in);
    const CorefGraph g = build_graph(chains);
    save_snapshot(g, paths.graph());
    const DegreeStats s = degree_stats(g);
    StageReport r{"graph"};
    r.add("nodes", count(s.node_count));
    r.add("edges", count(s.edge_count));
    r.add("isolated_nodes", count(s.isolated_nodes));
    r.add("max_degree", count(s.max_degree));
    r.add("total_weight", static_cast<std::int64_t>(s.total_weight));
    std::ostringstream hist;
    for (const auto& [w, n] : s.weight_histogram) hist << (hist.tellp() > 0 ? " " : "") << w << ':' << n;
    r.add("weight_histogram", hist.str());
    r.artifacts = {paths.graph()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_centrality(const PipelineConfig& cfg) {
  return guarded(cfg, "centrality", [&] {
    const auto paths = work(cfg);
    const CorefGraph g = load_snapshot(paths.graph());
    StageReport r{"centrality"};
    CentralityScores scores;
    const bool full = cfg.exact || cfg.pivots >= g.node_count();
    if (full) {
      if (!cfg.exact) {
        r.warnings.push_back("pivots (" + std::to_string(cfg.pivots) + ") >= node count (" +
                             std::to_string(g.node_count()) + "); computing exact scores");
      }
      scores = exact_betweenness(g, cfg.threads);
      r.add("method", std::string("exact"));
      r.add("sources", count(g.node_count()));
    } else {
      if (!cfg.seed) throw UsageError("pivot sampling needs a seed");
      const PivotConfig pc{cfg.pivots, sub_seed(*cfg.seed, "centrality")};
      if (auto w = pivot_warning(g.node_count(), pc)) r.warnings.push_back(*w);
      scores = approx_betweenness(g, pc, cfg.threads);
      r.add("method", std::string("pivots"));
      r.add("sources", static_cast<std::int64_t>(cfg.pivots));
    }
    {
      auto out = open_out(paths.scores());
      write_scores(scores, out);
    }
    std::size_t zero = 0;
    for (double x : scores.values) zero += x == 0.0 ? 1 : 0;
    r.add("nodes", count(g.node_count()));
    r.add("zero_score_nodes", count(zero));
    r.artifacts = {paths.scores()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_classify(const PipelineConfig& cfg) {
  return guarded(cfg, "classify", [&] {
    const auto paths = work(cfg);
    const CorefGraph g = load_snapshot(paths.graph());
    CentralityScores scores;
    {
      auto in = open_in(paths.scores());
      scores = read_scores(in);
    }
    PhraseTable phrases;
    {
      auto in = open_in(paths.phrases());
      phrases = read_phrase_table(in);
    }
    const auto names = name_tags(g, phrases, cfg.name_threshold);
    ClassifyStats stats;
    LabeledGraph labels = label_identity_zero_bc(g, scores, names, &stats);
    stats.name_reversals = correct_name_direction(labels);
    save_labels(labels, paths.classified());
    std::size_t name_count = 0;
    for (bool b : names) name_count += b ? 1 : 0;
    StageReport r{"classify"};
    r.add("nodes", count(g.node_count()));
    r.add("edges", count(g.edge_count()));
    r.add("name_nodes", count(name_count));
    r.add("zero_bc_nodes", count(stats.zero_bc_nodes));
    r.add("identity_edges", count(stats.identity));
    r.add("directed_edges", count(stats.directed));
    r.add("ties_broken", count(stats.ties_broken));
    r.add("name_reversals", count(stats.name_reversals));
    r.artifacts = {paths.classified()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_senses(const PipelineConfig& cfg) {
  return guarded(cfg, "senses", [&] {
    const auto paths = work(cfg);
    LabeledGraph labels = load_labels(paths.classified());
    StageReport r{"senses"};
    if (!cfg.senses) {
      r.warnings.push_back("sense resolution disabled; labels copied unchanged");
    } else {
      if (cfg.embeddings.empty()) {
        throw UsageError("no embeddings file configured (set senses = false to skip this stage)");
      }
      const EmbeddingTable emb = EmbeddingTable::load(cfg.embeddings);
      const SenseReport s = resolve_senses(labels, emb, {cfg.knn, cfg.knn_weighted});
      r.add("tasks", count(s.tasks));
      r.add("merged", count(s.merged));
      r.add("split", count(s.split));
      r.add("skipped_missing_embedding", count(s.skipped_missing_embedding));
      r.add("new_nodes", count(s.new_nodes));
      r.add("relabeled_identity", count(s.relabeled_identity));
      r.add("duplicated_edges", count(s.duplicated_edges));
      r.warnings = s.warnings;
    }
    save_labels(labels, paths.senses());
    r.artifacts = {paths.senses()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_noise(const PipelineConfig& cfg) {
  return guarded(cfg, "noise", [&] {
    const auto paths = work(cfg);
    LabeledGraph labels = load_labels(paths.senses());
    StageReport r{"noise"};
    if (!cfg.noise) {
      r.warnings.push_back("noise filtering disabled; labels copied unchanged");
    } else {
      const CorefGraph g = load_snapshot(paths.graph());
      const NoiseFilterStats s = filter_noise(labels, g, PmiStats::from_graph(g), cfg.pmi_threshold);
      r.add("relabeled_noise", count(s.relabeled));
      r.add("from_identity", count(s.from_identity));
      r.add("from_hierarchy", count(s.from_hierarchy));
    }
    save_labels(labels, paths.filtered());
    r.artifacts = {paths.filtered()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_build(const PipelineConfig& cfg) {
  return guarded(cfg, "build", [&] {
    const auto paths = work(cfg);
    LabeledGraph labels = load_labels(paths.filtered());
    const FinalizeReport fin = finalize(labels);
    save_labels(labels, paths.final_labels());
    LiftReport lift;
    const Ontology onto = build_ontology(labels, &lift);
    validate(onto);
    export_ontology(onto, ExportFormat::json, paths.ontology());

    StageReport r{"build"};
    r.add("identity_edges", count(fin.counts.identity));
    r.add("hierarchy_edges", count(fin.counts.hierarchy));
    r.add("noise_edges", count(fin.counts.noise));
    r.add("cycle_repairs", count(fin.repairs.size()));
    r.add("concepts", count(onto.concepts.size()));
    r.add("concept_edges", count(onto.edges.size()));
    r.add("internal_edges_dropped", count(lift.internal_dropped));
    for (const auto& rep : fin.repairs) {
      std::string cycle;
      for (const auto& c : rep.cycle) cycle += c + " > ";
      cycle += rep.cycle.front();
      r.warnings.push_back(std::string(rep.action == CycleRepair::Action::Reversed ? "reversed"
                                                                                   : "demoted") +
                           " " + std::to_string(rep.edges) + " edge(s) " + rep.from + " -> " +
                           rep.to + " on cycle " + cycle);
    }
    for (const auto& w : lift.warnings) r.warnings.push_back(w);
    r.artifacts = {paths.final_labels(), paths.ontology()};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_export(const PipelineConfig& cfg, ExportFormat format,
                         const std::filesystem::path& out) {
  return guarded(cfg, "export", [&] {
    const auto paths = work(cfg);
    Ontology onto = import_ontology(paths.ontology());
    if (cfg.reduce) onto = transitive_reduction(onto);
    export_ontology(onto, format, out);
    StageReport r{"export"};
    r.add("format", std::string(format == ExportFormat::json ? "json" : "edge_tsv"));
    r.add("concepts", count(onto.concepts.size()));
    r.add("edges", count(onto.edges.size()));
    r.artifacts = {out};
    finish(cfg, paths, r);
    return r;
  });
}

StageReport stage_evaluate(const PipelineConfig& cfg) {
  return guarded(cfg, "evaluate", [&] {
    if (cfg.reference_hierarchy.empty()) throw UsageError("no reference hierarchy configured");
    const auto paths = work(cfg);
    const Ontology onto = import_ontology(paths.ontology());
    StageReport r{"evaluate"};
    const ReferenceOntology ref = load_reference(cfg.reference_hierarchy, cfg.reference_aliases,
                                                 stop_lists(cfg), &r.warnings);
    const EvalReport eval = evaluate(onto, ref);
    const auto json_path = cfg.work_dir / "evaluation.json";
    const auto table_path = cfg.work_dir / "evaluation.txt";
    {
      auto out = open_out(json_path);
      out << eval.to_json() << '\n';
    }
    {
      auto out = open_out(table_path);
      out << eval.to_table();
    }
    auto metric = [&](const char* name, const std::optional<double>& x) {
      r.add(name, x ? ReportValue(*x) : ReportValue(std::string("n/a")));
    };
    r.add("shared_strings", count(eval.shared_strings));
    metric("precision", eval.hierarchy.precision);
    metric("recall", eval.hierarchy.recall);
    metric("f1", eval.hierarchy.f1);
    metric("direction_consistency", eval.direction.consistency);
    metric("entropy", eval.clustering.entropy);
    metric("ari", eval.clustering.ari);
    r.artifacts = {json_path, table_path};
    finish(cfg, paths, r);
    return r;
  });
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;
  result.reports.push_back(stage_ingest(cfg));
  result.reports.push_back(stage_graph(cfg));
  result.reports.push_back(stage_centrality(cfg));
  result.reports.push_back(stage_classify(cfg));
  result.reports.push_back(stage_senses(cfg));
  result.reports.push_back(stage_noise(cfg));
  result.reports.push_back(stage_build(cfg));
  if (!cfg.reference_hierarchy.empty()) result.reports.push_back(stage_evaluate(cfg));
  result.ontology = import_ontology(WorkPaths{cfg.work_dir}.ontology());
  return result;
}

}  // namespace corefonto
