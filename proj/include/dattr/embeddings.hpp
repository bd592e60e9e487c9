#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace dattr {

// Vocabulary-to-vector map. Immutable after load; safe for concurrent reads.
struct EmbeddingStore {
  std::unordered_map<std::string, Eigen::Index> vocab;  // term -> row
  Eigen::MatrixXd matrix;                               // rows x dim
  Eigen::Index dim = 0;
};

struct TermVector {
  Eigen::VectorXd values;  // all-zero when found == false
  bool found = false;
};

// Text format: optional "count dim" integer header, then one
// "token v1 v2 ... vD" line per term, whitespace separated.
// Duplicate tokens: first occurrence wins.
EmbeddingStore load_embeddings(const std::filesystem::path& path);

// Normalization chain used for every term lookup, most literal form first:
// as given (trimmed), lowercased, spaces->underscores, then de-pluralized
// last word ("ies"->"y", strip "es", strip "s"). Deduplicated, in order.
std::vector<std::string> lookup_candidates(const std::string& term);

TermVector lookup(const EmbeddingStore& store, const std::string& term);

// sqrt(max(cos(a, b), 0)); 0 when either term is missing or has zero norm.
double sqrt_cosine(const EmbeddingStore& store, const std::string& a,
                   const std::string& b);

}  // namespace dattr
