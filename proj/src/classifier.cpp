#include "dattr/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "dattr/errors.hpp"
#include "dattr/rng.hpp"

namespace dattr {

Eigen::VectorXd fit_column_scales(const Eigen::MatrixXd& x_train) {
  if (x_train.rows() < 1) throw DataError("cannot fit column scales on an empty matrix");
  Eigen::VectorXd scales(x_train.cols());
  for (Eigen::Index j = 0; j < x_train.cols(); ++j) {
    const double norm = x_train.col(j).norm();
    scales[j] = norm == 0.0 ? 1.0 : 1.0 / norm;
  }
  return scales;
}

// Dual coordinate descent for the L2-loss SVC dual
//   min_a 0.5 a'(Q + D)a - e'a,  a >= 0,  D = I/(2C),
// with shrinking and the projected-gradient stopping rule. The intercept is
// a constant-1 feature appended to every row, so it is regularized.
SvcSolution train_svc(const SvmProblem& problem, const SvcOptions& options) {
  const Eigen::Index n = problem.X.rows();
  const Eigen::Index d = problem.X.cols();
  if (n < 1) throw DataError("svm training set is empty");
  if (problem.y.size() != n) throw DataError("svm label vector length mismatch");
  if (options.C <= 0.0) throw ConfigError("svm C must be positive");
  if (options.tolerance <= 0.0) throw ConfigError("svm tolerance must be positive");

  bool has_pos = false;
  bool has_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (problem.y[i] == 1.0) {
      has_pos = true;
    } else if (problem.y[i] == -1.0) {
      has_neg = true;
    } else {
      throw DataError("svm labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw DataError("svm training set contains a single class");
  }

  const double inf = std::numeric_limits<double>::infinity();
  const double diag = 1.0 / (2.0 * options.C);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);  // last entry = intercept
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd qd(n);
  std::vector<Eigen::Index> index(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    qd[i] = problem.X.row(i).squaredNorm() + 1.0 + diag;
    index[static_cast<std::size_t>(i)] = i;
  }

  auto dot_aug = [&](Eigen::Index i) {
    return w.head(d).dot(problem.X.row(i)) + w[d];
  };

  SplitMix64 rng(options.seed);
  Eigen::Index active = n;
  double pg_max_old = inf;
  double pg_min_old = -inf;
  double pg_max_new = inf;
  double pg_min_new = -inf;
  int iter = 0;
  bool converged = false;

  while (iter < options.max_iterations) {
    pg_max_new = -inf;
    pg_min_new = inf;

    for (Eigen::Index i = 0; i + 1 < active; ++i) {
      const auto j = i + static_cast<Eigen::Index>(
                             rng.uniform_index(static_cast<std::size_t>(active - i)));
      std::swap(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(j)]);
    }

    for (Eigen::Index s = 0; s < active; ++s) {
      const Eigen::Index i = index[static_cast<std::size_t>(s)];
      const double yi = problem.y[i];
      const double grad = yi * dot_aug(i) - 1.0 + alpha[i] * diag;

      double pg = grad;
      if (alpha[i] == 0.0) {
        if (grad > pg_max_old) {  // shrink
          --active;
          std::swap(index[static_cast<std::size_t>(s)],
                    index[static_cast<std::size_t>(active)]);
          --s;
          continue;
        }
        pg = std::min(grad, 0.0);
      }

      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);

      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::max(old - grad / qd[i], 0.0);
        const double delta = (alpha[i] - old) * yi;
        w.head(d) += delta * problem.X.row(i).transpose();
        w[d] += delta;
      }
    }
    ++iter;

    if (pg_max_new - pg_min_new <= options.tolerance &&
        std::fabs(pg_max_new) <= options.tolerance &&
        std::fabs(pg_min_new) <= options.tolerance) {
      if (active == n) {
        converged = true;
        break;
      }
      // Re-check against the full set before accepting convergence.
      active = n;
      pg_max_old = inf;
      pg_min_old = -inf;
      continue;
    }
    pg_max_old = pg_max_new <= 0.0 ? inf : pg_max_new;
    pg_min_old = pg_min_new >= 0.0 ? -inf : pg_min_new;
  }

  SvcSolution sol;
  sol.weights = w.head(d);
  sol.intercept = w[d];
  sol.iterations = iter;
  sol.gap = pg_max_new - pg_min_new;
  sol.converged = converged;
  return sol;
}

double primal_objective(const SvmProblem& problem, const Eigen::VectorXd& weights,
                        double intercept, double C) {
  double obj = 0.5 * (weights.squaredNorm() + intercept * intercept);
  for (Eigen::Index i = 0; i < problem.X.rows(); ++i) {
    const double margin =
        1.0 - problem.y[i] * (problem.X.row(i).dot(weights) + intercept);
    if (margin > 0.0) obj += C * margin * margin;
  }
  return obj;
}

Eigen::VectorXd clip_negative(Eigen::VectorXd weights) {
  return weights.cwiseMax(0.0);
}

double decision_score(const TrainedClassifier& clf, const Eigen::VectorXd& x) {
  if (x.size() != clf.weights.size()) {
    throw DataError("feature vector length " + std::to_string(x.size()) +
                    " does not match classifier dimension " +
                    std::to_string(clf.weights.size()));
  }
  return clf.weights.dot(x.cwiseProduct(clf.scales)) + clf.intercept;
}

int predict(const TrainedClassifier& clf, const Eigen::VectorXd& x) {
  return decision_score(clf, x) > 0.0 ? 1 : 0;
}

int heuristic_a(double simdiff, double threshold) {
  return simdiff > threshold ? 1 : 0;
}

void save_classifier(const TrainedClassifier& clf, const std::filesystem::path& path,
                     std::uint64_t seed, const std::string& config_hash) {
  nlohmann::json doc;
  doc["feature_names"] = clf.feature_names;
  doc["weights"] = std::vector<double>(clf.weights.begin(), clf.weights.end());
  doc["intercept"] = clf.intercept;
  doc["scales"] = std::vector<double>(clf.scales.begin(), clf.scales.end());
  doc["C"] = clf.C;
  doc["tolerance"] = clf.tolerance;
  doc["max_iterations"] = clf.max_iterations;
  doc["seed"] = seed;
  doc["config_hash"] = config_hash;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write classifier file: " + path.string());
  out << doc.dump(2) << "\n";
}

TrainedClassifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open classifier file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("classifier file is not valid JSON: " + path.string() + ": " +
                    e.what());
  }

  TrainedClassifier clf;
  try {
    clf.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    const auto weights = doc.at("weights").get<std::vector<double>>();
    const auto scales = doc.at("scales").get<std::vector<double>>();
    clf.weights = Eigen::Map<const Eigen::VectorXd>(
        weights.data(), static_cast<Eigen::Index>(weights.size()));
    clf.scales = Eigen::Map<const Eigen::VectorXd>(
        scales.data(), static_cast<Eigen::Index>(scales.size()));
    clf.intercept = doc.at("intercept").get<double>();
    clf.C = doc.at("C").get<double>();
    clf.tolerance = doc.at("tolerance").get<double>();
    clf.max_iterations = doc.value("max_iterations", 1000);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("classifier file missing fields: " + path.string() + ": " +
                    e.what());
  }
  if (clf.weights.size() != static_cast<Eigen::Index>(clf.feature_names.size()) ||
      clf.scales.size() != clf.weights.size()) {
    throw DataError("classifier file has inconsistent vector lengths: " +
                    path.string());
  }
  return clf;
}

}  // namespace dattr
