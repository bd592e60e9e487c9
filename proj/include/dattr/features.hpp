#pragma once

#include <Eigen/Dense>

#include <array>
#include <string_view>
#include <vector>

#include "dattr/embeddings.hpp"
#include "dattr/lexical.hpp"
#include "dattr/sme.hpp"
#include "dattr/triple.hpp"

namespace dattr {

inline constexpr int kFeatureCount = 15;

// Column order of every feature matrix; reports and artifacts use it too.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "vector_similarity",  "sme_relatedto",         "sme_isa",
    "sme_hasa",           "sme_partof",            "sme_capableof",
    "sme_usedfor",        "sme_hascontext",        "sme_hasproperty",
    "sme_atlocation",     "sme_partof_swapped",    "sme_atlocation_swapped",
    "wikipedia_lead",     "wordnet_relatedness",   "google_ngrams"};

using FeatureVector = Eigen::Matrix<double, kFeatureCount, 1>;

// Everything extract() needs, immutable once loaded.
struct ResourceBundle {
  EmbeddingStore embeddings;
  LeadSectionCorpus leads;
  Lexicon lexicon;
  NgramCounts ngrams;
  SmeModel sme;
};

// sqrt_cosine(term1, att) - sqrt_cosine(term2, att).
double vector_similarity_feature(const EmbeddingStore& store, const Triple& t);

// All 15 features; every one is a term1-vs-term2 difference, so swapping the
// terms negates the vector exactly.
FeatureVector extract(const Triple& t, const ResourceBundle& r);

Eigen::MatrixXd build_feature_matrix(const std::vector<Triple>& triples,
                                     const ResourceBundle& r);

struct LabeledMatrix {
  Eigen::MatrixXd X;   // N x 15
  Eigen::VectorXi y;   // 0/1 labels, aligned with rows
};

// Row i = extract(triples[i]); throws DataError when a label is missing.
LabeledMatrix build_matrix(const std::vector<Triple>& triples,
                           const ResourceBundle& r);

}  // namespace dattr
