#include "dattr/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "dattr/errors.hpp"
#include "dattr/rng.hpp"

namespace dattr {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

std::filesystem::path require_path(const nlohmann::json& paths, const char* key) {
  if (!paths.contains(key) || !paths[key].is_string()) {
    throw ConfigError(std::string("config paths section lacks '") + key + "'");
  }
  return std::filesystem::path(paths[key].get<std::string>());
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path,
                      const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file is not valid JSON: " + path.string() + ": " +
                      e.what());
  }
  if (!doc.is_object() || !doc.contains("paths") || !doc["paths"].is_object()) {
    throw ConfigError("config file lacks a 'paths' object: " + path.string());
  }

  RunConfig config;
  const auto base = path.parent_path();
  const auto& paths = doc["paths"];

  config.paths.embeddings = resolve(base, require_path(paths, "embeddings"));
  config.paths.lead_sections = resolve(base, require_path(paths, "lead_sections"));
  config.paths.lexicon = resolve(base, require_path(paths, "lexicon"));
  config.paths.unigram_counts = resolve(base, require_path(paths, "unigram_counts"));
  config.paths.bigram_counts = resolve(base, require_path(paths, "bigram_counts"));
  config.paths.kg_edges = resolve(base, require_path(paths, "kg_edges"));
  if (paths.contains("relation_schema")) {
    config.paths.relation_schema =
        resolve(base, std::filesystem::path(paths["relation_schema"].get<std::string>()));
  }
  config.paths.train = resolve(base, require_path(paths, "train"));
  config.paths.validation = resolve(base, require_path(paths, "validation"));
  config.paths.test = resolve(base, require_path(paths, "test"));

  config.seed = doc.value("seed", 0ULL);
  config.output_dir = std::filesystem::path(doc.value("output_dir", std::string("out")));

  if (doc.contains("sme")) {
    const auto& sme = doc["sme"];
    config.sme.term_dim = sme.value("term_dim", config.sme.term_dim);
    config.sme.learning_rate = sme.value("learning_rate", config.sme.learning_rate);
    config.sme.iterations = sme.value("iterations", config.sme.iterations);
    config.sme.negatives_per_positive =
        sme.value("negatives_per_positive", config.sme.negatives_per_positive);
    config.sme_init_from_embeddings = sme.value("init_from_embeddings", false);
  }
  if (doc.contains("classifier")) {
    const auto& clf = doc["classifier"];
    config.classifier.C = clf.value("C", config.classifier.C);
    config.classifier.tolerance = clf.value("tolerance", config.classifier.tolerance);
    config.classifier.max_iterations =
        clf.value("max_iterations", config.classifier.max_iterations);
  }

  if (overrides.seed.has_value()) config.seed = *overrides.seed;
  if (overrides.output_dir.has_value()) config.output_dir = *overrides.output_dir;

  // The model artifact lives under the output directory unless given absolute.
  const std::filesystem::path model =
      paths.contains("sme_model")
          ? std::filesystem::path(paths["sme_model"].get<std::string>())
          : std::filesystem::path("sme_model.bin");
  config.paths.sme_model = model.is_absolute() ? model : config.output_dir / model;

  return config;
}

std::string config_hash(const RunConfig& config) {
  Fnv1a64 hash;
  auto feed = [&hash](std::string_view tag, const std::string& value) {
    hash.update(tag);
    hash.update("=");
    hash.update(value);
    hash.update(";");
  };
  feed("seed", std::to_string(config.seed));
  feed("sme.term_dim", std::to_string(config.sme.term_dim));
  feed("sme.learning_rate", std::to_string(config.sme.learning_rate));
  feed("sme.iterations", std::to_string(config.sme.iterations));
  feed("sme.negatives_per_positive", std::to_string(config.sme.negatives_per_positive));
  feed("sme.init_from_embeddings", config.sme_init_from_embeddings ? "1" : "0");
  feed("classifier.C", std::to_string(config.classifier.C));
  feed("classifier.tolerance", std::to_string(config.classifier.tolerance));
  feed("classifier.max_iterations", std::to_string(config.classifier.max_iterations));

  auto feed_file = [&hash](std::string_view tag, const std::filesystem::path& p) {
    hash.update(tag);
    hash.update(":");
    if (p.empty() || !std::filesystem::exists(p)) {
      hash.update("<absent>;");
      return;
    }
    std::ifstream in(p, std::ios::binary);
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
      hash.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    hash.update(";");
  };
  feed_file("embeddings", config.paths.embeddings);
  feed_file("lead_sections", config.paths.lead_sections);
  feed_file("lexicon", config.paths.lexicon);
  feed_file("unigram_counts", config.paths.unigram_counts);
  feed_file("bigram_counts", config.paths.bigram_counts);
  feed_file("kg_edges", config.paths.kg_edges);
  feed_file("relation_schema", config.paths.relation_schema);
  feed_file("train", config.paths.train);
  feed_file("validation", config.paths.validation);
  feed_file("test", config.paths.test);

  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash.digest();
  return out.str();
}

}  // namespace dattr
