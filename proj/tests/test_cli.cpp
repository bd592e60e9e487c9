#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dattr/commands.hpp"
#include "dattr/dataset.hpp"
#include "dattr/errors.hpp"
#include "test_util.hpp"

using namespace dattr;
using dattr::testing::TempDir;
using dattr::testing::data_dir;
using dattr::testing::read_file;
using dattr::testing::write_file;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
  const auto log = scratch / "cli_output.txt";
  const std::string command =
      std::string(DATTR_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = read_file(log);
  return result;
}

std::filesystem::path mini_config() { return data_dir() / "mini/config.json"; }

// Fast variant of the mini config for behavior-only tests.
std::filesystem::path quick_config(const TempDir& tmp) {
  std::ifstream in(mini_config());
  nlohmann::json doc;
  in >> doc;
  for (auto& [key, value] : doc["paths"].items()) {
    if (key == "sme_model") continue;
    value = (data_dir() / "mini" / value.get<std::string>()).string();
  }
  doc["sme"]["iterations"] = 2000;
  doc["sme"]["term_dim"] = 8;
  const auto path = tmp.path() / "config.json";
  write_file(path, doc.dump(2) + "\n");
  return path;
}

long count_data_rows(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::string line;
  long rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  TempDir tmp("cli-usage");
  CHECK(run_cli("", tmp.path()).exit_code == 1);
  CHECK(run_cli("frobnicate --config " + mini_config().string(), tmp.path()).exit_code == 1);
  CHECK(run_cli("train", tmp.path()).exit_code == 1);  // --config required
}

TEST_CASE("train-sme writes a reloadable, rerun-stable artifact") {
  TempDir tmp("cli-train-sme");
  const auto config = quick_config(tmp);

  const auto out1 = tmp.path() / "run1";
  const auto out2 = tmp.path() / "run2";
  auto r1 = run_cli("--config " + config.string() + " --out " + out1.string() +
                        " train-sme",
                    tmp.path());
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("--config " + config.string() + " --out " + out2.string() +
                        " train-sme",
                    tmp.path());
  REQUIRE(r2.exit_code == 0);

  CHECK(read_file(out1 / "sme_model.bin") == read_file(out2 / "sme_model.bin"));
  CHECK(read_file(out1 / "sme_training_log.tsv") ==
        read_file(out2 / "sme_training_log.tsv"));

  const auto model = load_sme_model(out1 / "sme_model.bin");
  const auto model2 = load_sme_model(out2 / "sme_model.bin");
  CHECK(score_triple(model, "HasA", "frog", "legs") ==
        score_triple(model2, "HasA", "frog", "legs"));
}

TEST_CASE("train-sme with a missing edge file names the path and exits 2") {
  TempDir tmp("cli-missing-edges");
  std::ifstream in(mini_config());
  nlohmann::json doc;
  in >> doc;
  for (auto& [key, value] : doc["paths"].items()) {
    if (key == "sme_model") continue;
    value = (data_dir() / "mini" / value.get<std::string>()).string();
  }
  doc["paths"]["kg_edges"] = (tmp.path() / "no_such_edges.tsv").string();
  const auto config = write_file(tmp.path() / "config.json", doc.dump(2));

  const auto r = run_cli("--config " + config.string() + " --out " +
                             (tmp.path() / "out").string() + " train-sme",
                         tmp.path());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("no_such_edges.tsv") != std::string::npos);
}

TEST_CASE("train, predict, evaluate pipeline on the mini dataset") {
  TempDir tmp("cli-pipeline");
  const auto config = mini_config();
  const auto out = tmp.path() / "out";
  const std::string base = "--config " + config.string() + " --out " + out.string();

  REQUIRE(run_cli(base + " train-sme", tmp.path()).exit_code == 0);
  REQUIRE(run_cli(base + " train", tmp.path()).exit_code == 0);

  SUBCASE("classifier artifact has 15 non-negative weights and echoes defaults") {
    nlohmann::json clf;
    std::ifstream in(out / "classifier.json");
    in >> clf;
    REQUIRE(clf["weights"].size() == 15);
    for (const auto& w : clf["weights"]) CHECK(w.get<double>() >= 0.0);
    CHECK(clf["C"].get<double>() == 1.0);
    CHECK(clf["tolerance"].get<double>() == 1e-4);
    CHECK(clf["feature_names"].size() == 15);
    CHECK(clf["seed"].get<std::uint64_t>() == 42);

    nlohmann::json report;
    std::ifstream rin(out / "train_report.json");
    rin >> report;
    CHECK(report["C"].get<double>() == 1.0);
    CHECK(report["tolerance"].get<double>() == 1e-4);
    CHECK(report["f1_macro"].get<double>() >= 0.95);
    CHECK(report["split"].get<std::string>() == "train");
  }

  SUBCASE("predict keeps row count and accepts unlabeled input") {
    // strip labels into a 3-column variant
    const auto test_triples = load_triples(data_dir() / "mini/test.csv");
    std::ostringstream unlabeled;
    for (const auto& t : test_triples) {
      unlabeled << t.term1 << ',' << t.term2 << ',' << t.attribute << "\n";
    }
    const auto unlabeled_path = write_file(tmp.path() / "test_unlabeled.csv",
                                           unlabeled.str());

    REQUIRE(run_cli(base + " predict " + unlabeled_path.string(), tmp.path())
                .exit_code == 0);
    const auto pred_path = out / "predictions-test_unlabeled.csv";
    REQUIRE(std::filesystem::exists(pred_path));
    CHECK(count_data_rows(pred_path) == static_cast<long>(test_triples.size()));

    const auto rows = load_predictions_csv(pred_path);
    REQUIRE(rows.size() == test_triples.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].term1 == test_triples[i].term1);
      REQUIRE(rows[i].label.has_value());
    }

    // rerun into a different directory: byte-identical predictions
    const auto out2 = tmp.path() / "out2";
    const std::string base2 = "--config " + config.string() + " --out " + out2.string();
    REQUIRE(run_cli(base2 + " train-sme", tmp.path()).exit_code == 0);
    REQUIRE(run_cli(base2 + " train", tmp.path()).exit_code == 0);
    REQUIRE(run_cli(base2 + " predict " + unlabeled_path.string(), tmp.path())
                .exit_code == 0);
    CHECK(read_file(pred_path) == read_file(out2 / "predictions-test_unlabeled.csv"));
  }

  SUBCASE("evaluate perfect predictions scores 1 with zero sem") {
    const auto gold = data_dir() / "mini/validation.csv";
    const auto triples = load_triples(gold);
    std::ostringstream perfect;
    for (const auto& t : triples) {
      perfect << t.term1 << ',' << t.term2 << ',' << t.attribute << ',' << *t.label
              << "\n";
    }
    const auto perfect_path = write_file(tmp.path() / "perfect.csv", perfect.str());
    const auto r = run_cli(base + " evaluate " + perfect_path.string() + " " +
                               gold.string(),
                           tmp.path());
    REQUIRE(r.exit_code == 0);
    nlohmann::json report;
    std::ifstream in(out / "report-validation.json");
    in >> report;
    CHECK(report["f1_macro"].get<double>() == 1.0);
    CHECK(report["sem"].get<double>() == 0.0);
    CHECK(report["n"].get<int>() == 20);
  }

  SUBCASE("evaluate reports the first mismatching key") {
    const auto gold = data_dir() / "mini/validation.csv";
    const auto triples = load_triples(gold);
    std::ostringstream bad;
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const auto& t = triples[i];
      bad << (i == 2 ? "wrong_term" : t.term1) << ',' << t.term2 << ','
          << t.attribute << ',' << *t.label << "\n";
    }
    const auto bad_path = write_file(tmp.path() / "bad.csv", bad.str());
    const auto r = run_cli(base + " evaluate " + bad_path.string() + " " +
                               gold.string(),
                           tmp.path());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("row 3") != std::string::npos);
    CHECK(r.output.find("wrong_term") != std::string::npos);
  }

  SUBCASE("extract-features writes the header and one row per triple") {
    REQUIRE(run_cli(base + " extract-features " +
                        (data_dir() / "mini/train.csv").string(),
                    tmp.path())
                .exit_code == 0);
    const auto path = out / "features-train.csv";
    REQUIRE(std::filesystem::exists(path));
    std::ifstream in(path);
    std::string stamp_line, header;
    std::getline(in, stamp_line);
    std::getline(in, header);
    CHECK(stamp_line.rfind("# seed=42", 0) == 0);
    CHECK(header ==
          "vector_similarity,sme_relatedto,sme_isa,sme_hasa,sme_partof,"
          "sme_capableof,sme_usedfor,sme_hascontext,sme_hasproperty,"
          "sme_atlocation,sme_partof_swapped,sme_atlocation_swapped,"
          "wikipedia_lead,wordnet_relatedness,google_ngrams,label");
    CHECK(count_data_rows(path) == 25);  // header + 24 triples
  }

  SUBCASE("ablate emits exactly 31 rows") {
    REQUIRE(run_cli(base + " ablate", tmp.path()).exit_code == 0);
    const auto path = out / "ablation.csv";
    REQUIRE(std::filesystem::exists(path));
    CHECK(count_data_rows(path) == 32);  // header + 31 subsets
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // stamp
    std::getline(in, line);
    CHECK(line == "subset,validation_f1,validation_sem,test_f1,test_sem");
    std::getline(in, line);
    CHECK(line.rfind("A,", 0) == 0);
    CHECK(std::filesystem::exists(out / "ablation_points.dat"));
  }
}

TEST_CASE("config hash tracks input file content") {
  TempDir tmp("cli-hash");
  // copy the mini data so one input can be edited
  for (const auto& entry : std::filesystem::directory_iterator(data_dir() / "mini")) {
    std::filesystem::copy_file(entry.path(), tmp.path() / entry.path().filename());
  }
  const auto config_path = tmp.path() / "config.json";
  {
    std::ifstream in(config_path);
    nlohmann::json doc;
    in >> doc;
    doc["sme"]["iterations"] = 500;
    doc["sme"]["term_dim"] = 8;
    write_file(config_path, doc.dump(2) + "\n");
  }

  const auto config_a = load_config(config_path);
  const auto hash_a = config_hash(config_a);

  // identical content elsewhere hashes identically
  const auto config_b = load_config(config_path, {.output_dir = tmp.path() / "other"});
  CHECK(config_hash(config_b) == hash_a);

  // touching an input file changes the hash
  std::ofstream append(tmp.path() / "unigrams.tsv", std::ios::app);
  append << "zebra\t123\n";
  append.close();
  const auto config_c = load_config(config_path);
  CHECK(config_hash(config_c) != hash_a);
}

TEST_CASE("commands are callable in-process") {
  TempDir tmp("cli-inproc");
  const auto config = load_config(quick_config(tmp),
                                  {.output_dir = tmp.path() / "out"});
  cmd_train_sme(config);
  cmd_train(config);
  const auto pred_path = cmd_predict(config, config.paths.test);
  const auto report = cmd_evaluate(config, pred_path, config.paths.test);
  CHECK(report.n == 20);
  CHECK(report.split == "test");
  CHECK(report.f1_macro > 0.5);
}
