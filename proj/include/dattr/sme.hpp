#pragma once

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dattr/embeddings.hpp"
#include "dattr/rng.hpp"
#include "dattr/triple.hpp"

namespace dattr {

inline constexpr int kRelationEmbeddingDim = 10;

// Relations whose inferred values feed the feature vector, in feature order.
inline constexpr std::array<std::string_view, 9> kFeatureRelations = {
    "RelatedTo", "IsA",        "HasA",        "PartOf",    "CapableOf",
    "UsedFor",   "HasContext", "HasProperty", "AtLocation"};

struct RelationSpec {
  std::string name;
  bool symmetric = false;
  std::vector<std::string> entails;  // more-general relations
};

class RelationSchema {
 public:
  RelationSchema() = default;
  explicit RelationSchema(std::vector<RelationSpec> relations);

  const std::vector<RelationSpec>& relations() const { return relations_; }
  std::size_t size() const { return relations_.size(); }
  int index_of(const std::string& name) const;  // -1 when absent
  const RelationSpec& at(int idx) const { return relations_[static_cast<std::size_t>(idx)]; }

  // Transitive entailment closure, excluding rel itself. Sorted indices.
  const std::vector<int>& entailed(int rel) const {
    return entailed_[static_cast<std::size_t>(rel)];
  }

 private:
  std::vector<RelationSpec> relations_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> entailed_;
};

// JSON: { "relations": [ { "name": str, "symmetric": bool, "entails": [str] } ] }
RelationSchema load_schema(const std::filesystem::path& path);

// The nine feature relations plus any extras: every relation entails
// RelatedTo, and RelatedTo is the only symmetric relation.
RelationSchema default_schema(const std::vector<std::string>& extra_relations = {});

struct EdgeTriple {
  std::string relation;
  std::string head;
  std::string tail;
  auto operator<=>(const EdgeTriple&) const = default;
};

struct KnowledgeGraph {
  std::vector<std::string> nodes;  // first-appearance order
  std::vector<EdgeTriple> edges;
};

// TSV: relation TAB head TAB tail; lines beginning '#' ignored.
KnowledgeGraph load_edges(const std::filesystem::path& path);

// Every edge relation must exist in the schema.
void validate_graph(const KnowledgeGraph& kg, const RelationSchema& schema);

// Deduplicated closure of the edges under relation generalization and
// symmetric reversal; original edges come first, derived ones follow in
// discovery order.
std::vector<EdgeTriple> expand_positives(const KnowledgeGraph& kg,
                                         const RelationSchema& schema);

// Precomputed state shared by all corrupt() draws over one graph.
struct CorruptionContext {
  CorruptionContext(const KnowledgeGraph& kg, const RelationSchema& schema);

  const RelationSchema* schema;
  std::vector<std::string> nodes;
  std::set<EdgeTriple> positives;  // expanded
  // Per relation: names allowed as replacements (not itself, not entailed).
  std::vector<std::vector<std::string>> replacements;
};

// Draws one negative by replacing a term, replacing the relation with an
// unentailed one, or flipping an asymmetric edge. Resamples up to 100 times,
// then falls back to term replacement; throws NumericalError on exhaustion.
EdgeTriple corrupt(const EdgeTriple& positive, const CorruptionContext& ctx,
                   SplitMix64& rng);

EdgeTriple corrupt(const EdgeTriple& positive, const KnowledgeGraph& kg,
                   const RelationSchema& schema, SplitMix64& rng);

struct SmeHyperparams {
  int term_dim = 32;
  double learning_rate = 0.05;
  long long iterations = 50000;
  int negatives_per_positive = 3;
  std::uint64_t seed = 0;
};

// Bilinear scorer: score(r, h, t) = logistic(e_h' M_r e_t + bias_r) with
// M_r the relation-embedding-weighted sum of the interaction slices.
struct SmeModel {
  std::vector<std::string> terms;
  std::unordered_map<std::string, int> term_index;
  std::vector<std::string> relations;
  std::unordered_map<std::string, int> relation_index;

  Eigen::MatrixXd term_embeddings;               // T x Dt
  Eigen::MatrixXd relation_embeddings;           // R x 10
  std::vector<Eigen::MatrixXd> interaction;      // 10 slices, each Dt x Dt
  Eigen::VectorXd relation_bias;                 // R

  Eigen::Index term_dim() const { return term_embeddings.cols(); }
  // Zero vector for unknown terms.
  Eigen::VectorXd term_vector(const std::string& term) const;
};

double logistic(double x);

double score_triple(const SmeModel& model, const std::string& rel,
                    const std::string& head, const std::string& tail);

// Per-example gradients of the clamped binary cross-entropy, for the trainer
// and the finite-difference checks.
struct TripleGradients {
  Eigen::VectorXd head;
  Eigen::VectorXd tail;
  Eigen::VectorXd relation;
  std::vector<Eigen::MatrixXd> slices;
  double bias = 0.0;
  double loss = 0.0;
};

double bce_loss(const SmeModel& model, int rel, int head, int tail, double target);
TripleGradients bce_gradients(const SmeModel& model, int rel, int head, int tail,
                              double target);

struct SmeTrainLog {
  // (step, mean per-example loss over the preceding window)
  std::vector<std::pair<long long, double>> window_losses;
};

// Seeded SGD over positives expanded from kg plus sampled corruptions.
// init_from, when given, seeds term rows from the store's first Dt dims.
SmeModel train_sme(const KnowledgeGraph& kg, const RelationSchema& schema,
                   const SmeHyperparams& hp,
                   const EmbeddingStore* init_from = nullptr,
                   SmeTrainLog* log = nullptr);

// The 11 relational feature values for a task triple, in feature order:
// combined RelatedTo, the eight term->attribute relations, then swapped
// PartOf and swapped AtLocation.
Eigen::VectorXd sme_features(const SmeModel& model, const Triple& triple);

// Binary artifact, magic "SMEM" + version byte; layout documented in README.
void save_sme_model(const SmeModel& model, const std::filesystem::path& path);
SmeModel load_sme_model(const std::filesystem::path& path);

}  // namespace dattr
