// corefonto: command line front end for the ontology pipeline.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <fstream>
#include <list>
#include <map>
#include <string>
#include <variant>
#include <vector>

#ifdef COREFONTO_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "corefonto/config.hpp"
#include "corefonto/error.hpp"
#include "corefonto/pipeline.hpp"
#include "corefonto/planted.hpp"

namespace {

using corefonto::PipelineConfig;
using corefonto::StageReport;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

// Flag values collected by CLI11; applied on top of the config file.
struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;

  void option(CLI::App* app, const std::string& flag, const std::string& key,
              const std::string& help) {
    app->add_option(flag, values[key], help);
  }
  void flag(CLI::App* app, const std::string& flag, const std::string& key,
            const std::string& help) {
    app->add_flag(flag, switches[key], help);
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : PipelineConfig::load(config_file);
    for (const auto& [key, value] : values) {
      if (!value.empty()) cfg.set(key, value);
    }
    for (const auto& [key, on] : switches) {
      if (on) cfg.set(key, "true");
    }
    cfg.validate();
    return cfg;
  }
};

void common_options(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_file, "Config file (key = value lines)");
  o.option(app, "-w,--work-dir", "work_dir", "Directory holding stage artifacts");
  o.option(app, "--threads", "threads", "Worker threads for centrality");
  o.option(app, "--seed", "seed", "Run seed");
}

void print_report(const StageReport& r) {
  std::cerr << r.stage << ':';
  for (const auto& [key, value] : r.counts) {
    std::cerr << ' ' << key << '=';
    std::visit([](const auto& x) { std::cerr << x; }, value);
  }
  std::cerr << '\n';
  for (const auto& w : r.warnings) std::cerr << "  warning: " << w << '\n';
}

corefonto::ExportFormat parse_format(const std::string& name) {
  if (name == "json") return corefonto::ExportFormat::json;
  if (name == "tsv" || name == "edge_tsv") return corefonto::ExportFormat::edge_tsv;
  throw corefonto::UsageError("unknown export format '" + name + "' (json or tsv)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Builds a concept ontology from coreference chains"};
  app.require_subcommand(1);

  // A list keeps the bound option storage at stable addresses.
  std::list<std::pair<CLI::App*, Overrides>> commands;
  auto command = [&](const std::string& name, const std::string& help) -> Overrides& {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back({sub, {}});
    common_options(sub, commands.back().second);
    return commands.back().second;
  };
  auto sub = [&] { return commands.back().first; };

  auto& ingest = command("ingest", "Parse and normalize a chains file");
  ingest.option(sub(), "--chains", "chains", "Chains file (JSONL)");
  ingest.option(sub(), "--stoplists", "stoplists", "Directory with stop-list files");

  command("graph", "Build the co-occurrence graph snapshot");

  auto& centrality = command("centrality", "Betweenness scores for every phrase");
  centrality.option(sub(), "--pivots", "pivots", "Number of sampled pivots");
  centrality.flag(sub(), "--exact", "exact", "Use every node as a source");

  auto& classify = command("classify", "Label edges from centrality and casing");
  classify.option(sub(), "--name-threshold", "name_threshold", "Capitalized share that makes a name");

  auto& senses = command("senses", "Merge or split name senses");
  senses.option(sub(), "--embeddings", "embeddings", "Embeddings file");
  senses.option(sub(), "--knn", "knn", "Neighbours per node in the KNN subgraph");
  senses.flag(sub(), "--knn-weighted", "knn_weighted", "Weight KNN edges by similarity");

  auto& noise = command("noise", "Relabel low-PMI edges as noise");
  noise.option(sub(), "--pmi-threshold", "pmi_threshold", "Edges with PMI below this are noise");

  command("build", "Finalize labels and build the ontology");

  auto& exporter = command("export", "Write the ontology as JSON or TSV");
  std::string format = "tsv";
  std::string out_path;
  sub()->add_option("--format", format, "json or tsv")->capture_default_str();
  sub()->add_option("-o,--out", out_path, "Output file (default: <work-dir>/ontology.<ext>)");
  exporter.flag(sub(), "--reduce", "reduce", "Apply transitive reduction");

  auto& evaluate = command("evaluate", "Score the ontology against a reference");
  evaluate.option(sub(), "--reference-hierarchy", "reference_hierarchy", "child<TAB>parent file");
  evaluate.option(sub(), "--reference-aliases", "reference_aliases", "Alias groups file");

  auto& run = command("run", "Run every stage in order");
  run.option(sub(), "--chains", "chains", "Chains file (JSONL)");
  run.option(sub(), "--stoplists", "stoplists", "Directory with stop-list files");
  run.option(sub(), "--pivots", "pivots", "Number of sampled pivots");
  run.flag(sub(), "--exact", "exact", "Use every node as a source");
  run.option(sub(), "--name-threshold", "name_threshold", "Capitalized share that makes a name");
  run.option(sub(), "--embeddings", "embeddings", "Embeddings file");
  run.option(sub(), "--knn", "knn", "Neighbours per node in the KNN subgraph");
  run.flag(sub(), "--knn-weighted", "knn_weighted", "Weight KNN edges by similarity");
  run.option(sub(), "--pmi-threshold", "pmi_threshold", "Edges with PMI below this are noise");
  run.option(sub(), "--reference-hierarchy", "reference_hierarchy", "child<TAB>parent file");
  run.option(sub(), "--reference-aliases", "reference_aliases", "Alias groups file");

  CLI::App* gen = app.add_subcommand("gen-planted", "Generate a synthetic corpus with known ontology");
  corefonto::PlantedOntologySpec spec;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("-o,--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--depth", spec.depth, "Taxonomy levels, root included")->capture_default_str();
  gen->add_option("--branching", spec.branching, "Children per internal concept")->capture_default_str();
  gen->add_option("--aliases", spec.aliases, "Aliases per leaf concept")->capture_default_str();
  gen->add_option("--internal-aliases", spec.internal_aliases, "Aliases per internal concept (default: --aliases)");
  gen->add_option("--documents", spec.documents, "Documents")->capture_default_str();
  gen->add_option("--chains-per-doc", spec.chains_per_document, "Chains per document")
      ->capture_default_str();
  gen->add_option("--ambiguity", spec.ambiguity_rate, "Share of leaves with a shared name")
      ->capture_default_str();
  gen->add_option("--noise", spec.noise_rate, "Spurious pairs relative to true pairs")
      ->capture_default_str();
  gen->add_option("--name-rate", spec.name_rate, "Share of named leaves")->capture_default_str();
  gen->add_option("--skip-level", spec.skip_level_rate, "Chains that also mention the grandparent")
      ->capture_default_str();
  gen->add_option("--dim", spec.embedding_dim, "Embedding dimension")->capture_default_str();
  gen->add_option("--embedding-noise", spec.embedding_noise, "Per-string embedding spread")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const auto corpus = corefonto::generate_planted(spec, gen_seed);
      corefonto::write_planted(corpus, gen_out);
      std::cerr << "gen-planted: concepts=" << corpus.concepts.size()
                << " documents=" << corpus.records.size() << " true_pairs=" << corpus.true_pairs
                << " noise_pairs=" << corpus.noise_pairs.size()
                << " ambiguous=" << corpus.ambiguous.size() << '\n';
      return 0;
    }
    for (auto& [cmd, overrides] : commands) {
      if (!cmd->parsed()) continue;
      const PipelineConfig cfg = overrides.resolve();
      const std::string name = cmd->get_name();
      if (name == "run") {
        for (const auto& r : corefonto::run_pipeline(cfg).reports) print_report(r);
      } else if (name == "ingest") {
        print_report(corefonto::stage_ingest(cfg));
      } else if (name == "graph") {
        print_report(corefonto::stage_graph(cfg));
      } else if (name == "centrality") {
        print_report(corefonto::stage_centrality(cfg));
      } else if (name == "classify") {
        print_report(corefonto::stage_classify(cfg));
      } else if (name == "senses") {
        print_report(corefonto::stage_senses(cfg));
      } else if (name == "noise") {
        print_report(corefonto::stage_noise(cfg));
      } else if (name == "build") {
        print_report(corefonto::stage_build(cfg));
      } else if (name == "export") {
        const auto fmt = parse_format(format);
        std::filesystem::path out = out_path;
        if (out.empty()) {
          out = cfg.work_dir / (fmt == corefonto::ExportFormat::json ? "ontology.export.json"
                                                                     : "ontology.tsv");
        }
        print_report(corefonto::stage_export(cfg, fmt, out));
      } else if (name == "evaluate") {
        print_report(corefonto::stage_evaluate(cfg));
        std::ifstream table(cfg.work_dir / "evaluation.txt");
        std::cout << table.rdbuf();
      }
    }
  } catch (const corefonto::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const corefonto::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const corefonto::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 0;
}
