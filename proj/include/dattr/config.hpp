#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dattr/classifier.hpp"
#include "dattr/sme.hpp"

namespace dattr {

// One JSON config drives every command. Input paths resolve relative to the
// config file's directory; the sme_model artifact path resolves relative to
// the output directory so reruns into fresh directories stay self-contained.
struct RunConfig {
  struct Paths {
    std::filesystem::path embeddings;
    std::filesystem::path lead_sections;
    std::filesystem::path lexicon;
    std::filesystem::path unigram_counts;
    std::filesystem::path bigram_counts;
    std::filesystem::path kg_edges;
    std::filesystem::path relation_schema;  // empty = built-in default schema
    std::filesystem::path sme_model;
    std::filesystem::path train;
    std::filesystem::path validation;
    std::filesystem::path test;
  } paths;

  SmeHyperparams sme;  // seed filled from the run seed at command time
  bool sme_init_from_embeddings = false;
  SvcOptions classifier;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

RunConfig load_config(const std::filesystem::path& path,
                      const ConfigOverrides& overrides = {});

// FNV-1a over the logical config (seed, hyperparameters) and the content of
// every referenced input file that exists. Output locations are excluded so
// identical runs into different directories hash identically.
std::string config_hash(const RunConfig& config);

}  // namespace dattr
