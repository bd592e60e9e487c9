#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

#include "dattr/triple.hpp"

namespace dattr {

// CSV without header: "term1,term2,attribute,label" (label 0/1), or the
// 3-field unlabeled variant. Lines beginning '#' are ignored.
std::vector<Triple> load_triples(const std::filesystem::path& path);

struct PredictionRecord {
  Triple triple;
  int predicted = 0;
  double decision_score = 0.0;  // sign agrees with predicted
};

// "term1,term2,attribute,predicted" rows preceded by a '#' stamp line.
void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<PredictionRecord>& records,
                           const std::string& stamp);

// Triples with the predicted label in the label slot.
std::vector<Triple> load_predictions_csv(const std::filesystem::path& path);

// Header row of feature names (plus "label" when y is non-empty), one row
// per matrix row, round-trip precision.
void write_feature_csv(const std::filesystem::path& path, const Eigen::MatrixXd& x,
                       const Eigen::VectorXi& y, const std::string& stamp);

}  // namespace dattr
