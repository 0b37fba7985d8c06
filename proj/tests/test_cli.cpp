#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "support.hpp"

namespace {

using corefonto::testing::TempDir;
using corefonto::testing::read_file;
using corefonto::testing::write_file;

int run(const std::string& args) {
  const std::string cmd = std::string(COREFONTO_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help"), 0); }

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("centrality --threads lots"), 1);
  EXPECT_EQ(run("ingest"), 1);  // no chains file
}

TEST(Cli, DataErrorsExitTwo) {
  TempDir dir("cli-data");
  EXPECT_EQ(run("ingest --chains " + (dir / "absent.jsonl").string() + " -w " + dir.path().string()),
            2);
  EXPECT_EQ(run("graph -w " + dir.path().string()), 2);
}

TEST(Cli, PlantedRunAndExport) {
  TempDir dir("cli-run");
  const auto data = dir.path().string();
  const auto work = (dir / "work").string();
  ASSERT_EQ(run("gen-planted -o " + data + " --seed 3 --depth 2 --branching 3 --documents 200"), 0);
  ASSERT_EQ(run("run -w " + work + " --seed 3 --exact --chains " + data + "/chains.jsonl" +
                " --embeddings " + data + "/embeddings.tsv --reference-hierarchy " + data +
                "/reference_hierarchy.tsv --reference-aliases " + data + "/reference_aliases.tsv"),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir / "work" / "evaluation.json"));
  ASSERT_EQ(run("export -w " + work + " --format json -o " + (dir / "a.json").string()), 0);
  ASSERT_EQ(run("export -w " + work + " --format tsv -o " + (dir / "a.tsv").string()), 0);
  EXPECT_FALSE(read_file(dir / "a.json").empty());
  EXPECT_FALSE(read_file(dir / "a.tsv").empty());
  EXPECT_EQ(run("export -w " + work + " --format xml"), 1);
}

TEST(Cli, ConfigFileIsRead) {
  TempDir dir("cli-config");
  write_file(dir / "bad.conf", "pivots = -4\n");
  EXPECT_EQ(run("graph -c " + (dir / "bad.conf").string()), 1);
  write_file(dir / "chains.jsonl", R"({"doc_id":"d","chains":[["asthma","lung disease"]]})" "\n");
  write_file(dir / "good.conf", "chains = " + (dir / "chains.jsonl").string() + "\nwork_dir = " +
                                    (dir / "w").string() + "\n");
  EXPECT_EQ(run("ingest -c " + (dir / "good.conf").string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "w" / "phrases.tsv"));
}

}  // namespace
