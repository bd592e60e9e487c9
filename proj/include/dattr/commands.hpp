#pragma once

#include <filesystem>

#include "dattr/config.hpp"
#include "dattr/evaluation.hpp"
#include "dattr/features.hpp"

namespace dattr {

// Sub-seed labels: all randomness flows from config.seed through these.
inline constexpr std::string_view kSmeSeedLabel = "sme";
inline constexpr std::string_view kSvcSeedLabel = "svc";
inline constexpr std::string_view kBootstrapSeedLabel = "bootstrap";

// Loads every resource declared in the config, including the trained SME
// model artifact.
ResourceBundle load_bundle(const RunConfig& config);

// Schema from config.paths.relation_schema, or the built-in default extended
// with the relations present in the edge file.
RelationSchema schema_for(const RunConfig& config, const KnowledgeGraph& kg);

// Trains the SME model and writes the model artifact plus a training log
// (mean loss per 1000 steps). Returns the model path.
std::filesystem::path cmd_train_sme(const RunConfig& config);

// Extracts the 15 features for one split and writes them as CSV.
std::filesystem::path cmd_extract_features(const RunConfig& config,
                                           const std::filesystem::path& input_csv);

// Extracts features for the train split, fits scales + SVC, clips, writes the
// classifier artifact and a training report.
std::filesystem::path cmd_train(const RunConfig& config);

// Predicts one split with the saved classifier; output name embeds the input
// name and the row count is verified to match the input before returning.
std::filesystem::path cmd_predict(const RunConfig& config,
                                  const std::filesystem::path& split_csv);

// Scores a predictions file against gold labels; writes the report JSON.
EvalReport cmd_evaluate(const RunConfig& config,
                        const std::filesystem::path& predictions_csv,
                        const std::filesystem::path& gold_csv);

// Full 31-subset ablation; writes the CSV and a plain points file.
std::filesystem::path cmd_ablate(const RunConfig& config);

}  // namespace dattr
