#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "corefonto/config.hpp"
#include "corefonto/ontology.hpp"

namespace corefonto {

using ReportValue = std::variant<std::int64_t, double, std::string>;

struct StageReport {
  std::string stage;
  std::vector<std::pair<std::string, ReportValue>> counts{};
  std::vector<std::string> warnings{};
  std::vector<std::filesystem::path> artifacts{};

  void add(std::string key, ReportValue value) { counts.emplace_back(std::move(key), std::move(value)); }
  // JSON object with the stage name, the resolved config, counts, warnings
  // and artifact paths.
  std::string to_json(const PipelineConfig& cfg) const;
};

// Artifact locations inside the work directory.
struct WorkPaths {
  std::filesystem::path dir;

  std::filesystem::path phrases() const { return dir / "phrases.tsv"; }
  std::filesystem::path chains() const { return dir / "chains.norm.jsonl"; }
  std::filesystem::path graph() const { return dir / "graph.txt"; }
  std::filesystem::path scores() const { return dir / "scores.txt"; }
  std::filesystem::path classified() const { return dir / "labels.classified.txt"; }
  std::filesystem::path senses() const { return dir / "labels.senses.txt"; }
  std::filesystem::path filtered() const { return dir / "labels.noise.txt"; }
  std::filesystem::path final_labels() const { return dir / "labels.final.txt"; }
  std::filesystem::path ontology() const { return dir / "ontology.json"; }
  std::filesystem::path report(const std::string& stage) const { return dir / (stage + ".report.json"); }
};

// Each stage reads the previous stage's artifacts from cfg.work_dir, writes
// its own plus "<stage>.report.json", and returns the report. Errors carry the
// stage name and keep their type (UsageError, DataError, InvariantError).
StageReport stage_ingest(const PipelineConfig& cfg);
StageReport stage_graph(const PipelineConfig& cfg);
StageReport stage_centrality(const PipelineConfig& cfg);
StageReport stage_classify(const PipelineConfig& cfg);
StageReport stage_senses(const PipelineConfig& cfg);
StageReport stage_noise(const PipelineConfig& cfg);
StageReport stage_build(const PipelineConfig& cfg);
StageReport stage_export(const PipelineConfig& cfg, ExportFormat format,
                         const std::filesystem::path& out);
StageReport stage_evaluate(const PipelineConfig& cfg);

struct PipelineResult {
  Ontology ontology;
  std::vector<StageReport> reports;
};

// ingest -> graph -> centrality -> classify -> senses -> noise -> build, then
// evaluate when a reference hierarchy is configured.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace corefonto
