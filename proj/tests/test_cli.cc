#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "emoxai/commands.h"
#include "emoxai/multilabel.h"
#include "toy_corpora.h"

namespace emoxai {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("emoxai_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(EMOXAI_CLI) + " " + args + " >" + (dir_ / "stdout.txt").string() +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string err() const { return slurp(dir_ / "stderr.txt"); }

  fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << "[dataset]\npath = " EMOXAI_TEST_DATA "/toy_corpus.csv\nid_column = id\n"
                     << "platform_column = platform\n" << body;
    return p;
  }

  fs::path dir_;
};

TEST_F(Cli, UsageAndMissingFiles) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("stats --bogus"), 1);
  EXPECT_EQ(run("stats --config " + (dir_ / "missing.ini").string()), 1);
  EXPECT_FALSE(err().empty());
  const fs::path cfg = dir_ / "c.ini";
  std::ofstream(cfg) << "[dataset]\npath = missing.csv\n";
  EXPECT_EQ(run("stats --config " + cfg.string()), 2);
  EXPECT_NE(err().find("missing.csv"), std::string::npos);
}

TEST_F(Cli, StrictFlagTurnsBadRowIntoDataError) {
  const fs::path csv = dir_ / "bad.csv";
  std::ofstream(csv) << "text,love,joy,surprise,anger,sadness,fear\na,1,0,0,0,0,0\nb,0,2,0,0,0,0\n";
  const fs::path cfg = dir_ / "c.ini";
  std::ofstream(cfg) << "[dataset]\npath = bad.csv\n";
  EXPECT_EQ(run("stats --config " + cfg.string() + " --out " + dir_.string()), 0);
  const auto stats = nlohmann::json::parse(slurp(dir_ / "stats.json"));
  EXPECT_EQ(stats["record_count"], 1);
  EXPECT_EQ(stats["rejected_rows"][0]["row"], 2);
  EXPECT_EQ(run("stats --strict --config " + cfg.string() + " --out " + dir_.string()), 2);
  EXPECT_NE(err().find("row 2"), std::string::npos);
}

TEST_F(Cli, StatsHandTally) {
  const fs::path csv = dir_ / "ten.csv";
  std::ofstream(csv) << "text,love,joy,surprise,anger,sadness,fear\n"
                        "ভালো ভালো খুব,1,0,0,0,0,0\n"
                        "খুব!,0,1,0,0,0,0\n"
                        "রাগ। রাগ,0,0,0,1,0,0\n"
                        "ভয়,0,0,0,0,0,1\n"
                        "দুঃখ ভয়,0,0,0,0,1,1\n"
                        "অবাক,0,0,1,0,0,0\n"
                        "আনন্দ,0,1,0,0,0,0\n"
                        "আনন্দ ভালো,1,1,0,0,0,0\n"
                        "রাগ,0,0,0,1,0,0\n"
                        "ভালো,1,0,0,0,0,0\n";
  const fs::path cfg = dir_ / "c.ini";
  std::ofstream(cfg) << "[dataset]\npath = ten.csv\n";
  ASSERT_EQ(run("stats --config " + cfg.string() + " --out " + dir_.string()), 0);
  const auto s = nlohmann::json::parse(slurp(dir_ / "stats.json"));
  EXPECT_EQ(s["record_count"], 10);
  EXPECT_EQ(s["per_label_counts"]["love"], 3);
  EXPECT_EQ(s["per_label_counts"]["joy"], 3);
  EXPECT_EQ(s["per_label_counts"]["surprise"], 1);
  EXPECT_EQ(s["per_label_counts"]["anger"], 2);
  EXPECT_EQ(s["per_label_counts"]["sadness"], 1);
  EXPECT_EQ(s["per_label_counts"]["fear"], 2);
  EXPECT_DOUBLE_EQ(s["multi_label_fraction"].get<double>(), 0.2);
  EXPECT_DOUBLE_EQ(s["avg_sentences_per_entry"]["mean"].get<double>(), 1.1);
  // ভালো 4, রাগ 3, then ties at 2 in byte order.
  EXPECT_EQ(s["top_terms"][0], nlohmann::json::array({"ভালো", 4}));
  EXPECT_EQ(s["top_terms"][1], nlohmann::json::array({"রাগ", 3}));
  EXPECT_TRUE(s["provenance"].contains("config_hash"));
}

constexpr const char* kSingleCell =
    "[run]\nseed = 5\n[features]\nngrams = 1-1\n[pca]\nmode = off\n[models]\nfamilies = linear_svm\n"
    "[boosting]\nenabled = false\n";

TEST_F(Cli, SweepOfOneEqualsDirectTrainAndEvaluate) {
  const auto cfg = write_config("one.ini", kSingleCell);
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + (dir_ / "sweep").string()), 0) << err();
  ASSERT_EQ(run("train --config " + cfg.string() + " --out " + (dir_ / "direct").string()), 0) << err();
  ASSERT_EQ(run("evaluate --config " + cfg.string() + " --model " + (dir_ / "direct/model.json").string() +
                " --out " + (dir_ / "direct").string()),
            0)
      << err();
  const auto results = nlohmann::json::parse(slurp(dir_ / "sweep/results.json"));
  ASSERT_EQ(results["cells"].size(), 1u);
  const auto metrics = nlohmann::json::parse(slurp(dir_ / "direct/metrics.json"));
  EXPECT_EQ(results["cells"][0]["test"]["macro"], metrics["macro"]);
  EXPECT_EQ(results["cells"][0]["test"]["per_label"], metrics["per_label"]);
  const std::string table = slurp(dir_ / "sweep/results.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 2);
  EXPECT_NE(table.find("Linear SVM,"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "sweep/split.json"), slurp(dir_ / "direct/split.json"));
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  const auto cfg = write_config("toy.ini",
                                "[run]\nseed = 3\njobs = 2\n[features]\nngrams = 1-1, 2-2\n[pca]\ncomponents = 6\n"
                                "[forest]\nn_trees = 10\n[adaboost]\nn_estimators = 8\n[lime]\nnum_samples = 300\n");
  for (const char* run_dir : {"a", "b"}) {
    const auto out = (dir_ / run_dir).string();
    ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + out + "/sweep"), 0) << err();
    ASSERT_EQ(run("train --config " + cfg.string() + " --family adaboost --ngrams 1-2 --pca --out " + out + "/train"),
              0)
        << err();
    ASSERT_EQ(run("explain --config " + cfg.string() + " --model " + out + "/train/model.json --label anger" +
                  " --text 'আজ খুব রাগ হলো' --out " + out + "/explain"),
              0)
        << err();
  }
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir_ / "a");
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_GE(files, 20u);
}

TEST_F(Cli, TableCellsRecomputeFromArtifacts) {
  const auto cfg = write_config("toy.ini",
                                "[run]\nseed = 8\n[features]\nngrams = 1-1, 2-2\n[pca]\ncomponents = 6\n"
                                "[knn]\nk = 3, 5\n[forest]\nn_trees = 10\n[adaboost]\nn_estimators = 8\n");
  const fs::path out = dir_ / "sweep";
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + out.string()), 0) << err();
  const auto results = nlohmann::json::parse(slurp(out / "results.json"));
  const auto config = load_experiment_config(cfg);
  const auto data = load_partitioned(config, out / "split.json");
  const std::string table = slurp(out / "results.csv") + slurp(out / "boosting.csv");
  ASSERT_EQ(results["cells"].size(), 14u);
  for (const auto& cell : results["cells"]) {
    ASSERT_TRUE(cell["ok"].get<bool>()) << cell.dump();
    const auto model = MultiLabelModel::load(out / cell["artifact"].get<std::string>());
    const auto report = evaluate_records(model, data.test);
    EXPECT_EQ(nlohmann::json(report.macro.f1), cell["test"]["macro"]["f1"]);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", report.macro.f1);
    EXPECT_NE(table.find(buf), std::string::npos) << cell["id"];
    EXPECT_EQ(model.metadata()["provenance"]["config_hash"], results["provenance"]["config_hash"]);
  }
}

TEST_F(Cli, ExplainConstantAndKeywordModels) {
  std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions> constant;
  for (auto& c : constant) c = std::make_unique<ConstantClassifier>(-1.0);
  std::vector<std::string> texts;
  for (const auto& r : testing_corpora::keyword_records()) texts.push_back(r.text);
  MultiLabelModel flat(FeaturePipeline::fit(texts, PipelineConfig{}), ClassifierConfig{}, std::move(constant),
                       std::array<bool, kNumEmotions>{});
  flat.save(dir_ / "constant.json");
  ASSERT_EQ(run("explain --model " + (dir_ / "constant.json").string() +
                " --label joy --samples 500 --text 'আজ খুব আনন্দ' --out " + dir_.string()),
            0)
      << err();
  auto e = nlohmann::json::parse(slurp(dir_ / "explanation.json"));
  ASSERT_FALSE(e["features"].empty());
  for (const auto& f : e["features"]) EXPECT_NEAR(f["weight"].get<double>(), 0.0, 1e-9);

  ClassifierConfig svm;
  train_multilabel(testing_corpora::keyword_records(), PipelineConfig{}, svm).save(dir_ / "keyword.json");
  ASSERT_EQ(run("explain --model " + (dir_ / "keyword.json").string() +
                " --label anger --samples 1000 --text 'এই ভিডিও দেখে খুব রাগ হলো' --out " + dir_.string()),
            0)
      << err();
  e = nlohmann::json::parse(slurp(dir_ / "explanation.json"));
  EXPECT_EQ(e["features"][0]["word"], "রাগ");
  EXPECT_EQ(e["label"], "anger");
  EXPECT_EQ(run("explain --model " + (dir_ / "keyword.json").string() + " --label rage --text x --out " +
                dir_.string()),
            1);
}

}  // namespace
}  // namespace emoxai
