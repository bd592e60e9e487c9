#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dattr {

inline constexpr double kDefaultHeuristicThreshold = 0.0961;

// Multiplicative per-column factors making every nonzero training column
// unit L2 norm; fit on training data only, reused verbatim elsewhere.
Eigen::VectorXd fit_column_scales(const Eigen::MatrixXd& x_train);

struct SvmProblem {
  Eigen::MatrixXd X;  // already column-scaled
  Eigen::VectorXd y;  // +1 / -1
};

struct SvcOptions {
  double C = 1.0;
  double tolerance = 1e-4;
  int max_iterations = 1000;  // full passes
  std::uint64_t seed = 1;
};

struct SvcSolution {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  int iterations = 0;
  double gap = 0.0;  // projected-gradient spread at the last pass
  bool converged = false;
};

// L2-regularized squared-hinge linear SVM via dual coordinate descent,
// with a regularized intercept (constant-1 feature appended internally).
// Minimizes 0.5*(|w|^2 + b^2) + C * sum max(0, 1 - y_i (w.x_i + b))^2.
SvcSolution train_svc(const SvmProblem& problem, const SvcOptions& options = {});

double primal_objective(const SvmProblem& problem, const Eigen::VectorXd& weights,
                        double intercept, double C);

// Post-training guard against overfit negative coefficients: feature weights
// floored at zero, intercept untouched, never re-fit.
Eigen::VectorXd clip_negative(Eigen::VectorXd weights);

struct TrainedClassifier {
  std::vector<std::string> feature_names;
  Eigen::VectorXd weights;  // >= 0 after finalization
  double intercept = 0.0;
  Eigen::VectorXd scales;
  double C = 1.0;
  double tolerance = 1e-4;
  int max_iterations = 1000;
};

double decision_score(const TrainedClassifier& clf, const Eigen::VectorXd& x);

// 1 when the decision score is strictly positive, else 0.
int predict(const TrainedClassifier& clf, const Eigen::VectorXd& x);

// Closed-form baseline over the vector-similarity difference alone.
int heuristic_a(double simdiff, double threshold = kDefaultHeuristicThreshold);

// JSON artifact: feature_names, weights, intercept, scales, C, tolerance
// (plus max_iterations, seed, config_hash stamps).
void save_classifier(const TrainedClassifier& clf, const std::filesystem::path& path,
                     std::uint64_t seed, const std::string& config_hash);
TrainedClassifier load_classifier(const std::filesystem::path& path);

}  // namespace dattr
