#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dattr/commands.hpp"
#include "dattr/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discriminative-attribute pipeline: feature extraction, SVM "
               "training, prediction, evaluation, and ablation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Run configuration JSON")
      ->required()
      ->check(CLI::ExistingFile);
  std::uint64_t seed_override = 0;
  auto* seed_opt = app.add_option("--seed", seed_override, "Override the config seed");
  std::string out_override;
  auto* out_opt = app.add_option("--out", out_override, "Override the output directory");

  auto* train_sme = app.add_subcommand("train-sme", "Train the relational model");
  auto* extract = app.add_subcommand("extract-features", "Write the feature matrix CSV");
  std::string extract_input;
  extract->add_option("input", extract_input, "Task CSV to featurize")->required();
  auto* train = app.add_subcommand("train", "Train the clipped linear SVM");
  auto* predict = app.add_subcommand("predict", "Predict a split");
  std::string predict_input;
  predict->add_option("input", predict_input, "Task CSV to predict")->required();
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
  std::string eval_predictions;
  std::string eval_gold;
  evaluate->add_option("predictions", eval_predictions, "Predictions CSV")->required();
  evaluate->add_option("gold", eval_gold, "Gold task CSV")->required();
  auto* ablate = app.add_subcommand("ablate", "Run the 31-subset source ablation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    dattr::ConfigOverrides overrides;
    if (seed_opt->count() > 0) overrides.seed = seed_override;
    if (out_opt->count() > 0) overrides.output_dir = out_override;
    const dattr::RunConfig config = dattr::load_config(config_path, overrides);

    if (train_sme->parsed()) {
      const auto path = dattr::cmd_train_sme(config);
      std::cout << "wrote " << path.string() << "\n";
    } else if (extract->parsed()) {
      const auto path = dattr::cmd_extract_features(config, extract_input);
      std::cout << "wrote " << path.string() << "\n";
    } else if (train->parsed()) {
      const auto path = dattr::cmd_train(config);
      std::cout << "wrote " << path.string() << "\n";
    } else if (predict->parsed()) {
      const auto path = dattr::cmd_predict(config, predict_input);
      std::cout << "wrote " << path.string() << "\n";
    } else if (evaluate->parsed()) {
      const auto report = dattr::cmd_evaluate(config, eval_predictions, eval_gold);
      std::cout << "split=" << report.split << " f1_macro=" << report.f1_macro
                << " sem=" << report.sem << " n=" << report.n << "\n";
    } else if (ablate->parsed()) {
      const auto path = dattr::cmd_ablate(config);
      std::cout << "wrote " << path.string() << "\n";
    }
  } catch (const dattr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dattr::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const dattr::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
