#include "dattr/evaluation.hpp"

#include <cmath>

#include "dattr/errors.hpp"
#include "dattr/rng.hpp"

namespace dattr {
namespace {

double class_f1(const std::vector<int>& predictions, const std::vector<int>& gold,
                int cls) {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predictions[i] == cls;
    const bool g = gold[i] == cls;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  if (tp + fp + fn == 0) return 1.0;  // class absent and never predicted
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double macro_f1_value(const std::vector<int>& predictions, const std::vector<int>& gold) {
  return 0.5 * (class_f1(predictions, gold, 1) + class_f1(predictions, gold, 0));
}

}  // namespace

EvalReport macro_f1(const std::vector<int>& predictions, const std::vector<int>& gold) {
  if (predictions.size() != gold.size()) {
    throw DataError("predictions length " + std::to_string(predictions.size()) +
                    " != gold length " + std::to_string(gold.size()));
  }
  if (gold.empty()) throw DataError("cannot evaluate an empty prediction list");

  EvalReport report;
  report.f1_positive = class_f1(predictions, gold, 1);
  report.f1_negative = class_f1(predictions, gold, 0);
  report.f1_macro = 0.5 * (report.f1_positive + report.f1_negative);
  report.n = static_cast<int>(gold.size());
  return report;
}

double bootstrap_sem(const std::vector<int>& predictions, const std::vector<int>& gold,
                     int samples, std::uint64_t seed) {
  if (predictions.size() != gold.size()) {
    throw DataError("predictions length " + std::to_string(predictions.size()) +
                    " != gold length " + std::to_string(gold.size()));
  }
  if (gold.size() < 2) throw DataError("bootstrap needs at least 2 instances");
  if (samples < 2) throw ConfigError("bootstrap needs at least 2 resamples");

  SplitMix64 rng(seed);
  const std::size_t n = gold.size();
  std::vector<int> rp(n);
  std::vector<int> rg(n);
  std::vector<double> scores(static_cast<std::size_t>(samples));

  for (int b = 0; b < samples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rng.uniform_index(n);
      rp[i] = predictions[j];
      rg[i] = gold[j];
    }
    scores[static_cast<std::size_t>(b)] = macro_f1_value(rp, rg);
  }

  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / static_cast<double>(samples - 1));
}

std::string subset_label(unsigned mask) {
  std::string label;
  for (unsigned bit = 0; bit < kSourceCount; ++bit) {
    if (mask & (1u << bit)) label.push_back(static_cast<char>('A' + bit));
  }
  return label;
}

std::vector<int> subset_columns(unsigned mask) {
  std::vector<int> cols;
  if (mask & 1u) cols.push_back(0);                          // A: vector similarity
  if (mask & 2u) {
    for (int c = 1; c <= 11; ++c) cols.push_back(c);         // B: the 11 SME values
  }
  if (mask & 4u) cols.push_back(12);                         // C: Wikipedia leads
  if (mask & 8u) cols.push_back(13);                         // D: lexicon relatedness
  if (mask & 16u) cols.push_back(14);                        // E: n-gram significance
  return cols;
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const std::vector<int>& cols) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = x.col(cols[j]);
  }
  return out;
}

std::vector<int> predict_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& scales,
                              const Eigen::VectorXd& weights, double intercept) {
  std::vector<int> preds(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double score =
        weights.dot(x.row(i).transpose().cwiseProduct(scales)) + intercept;
    preds[static_cast<std::size_t>(i)] = score > 0.0 ? 1 : 0;
  }
  return preds;
}

}  // namespace

std::vector<AblationRow> ablate(const AblationInputs& splits, const ResourceBundle& r,
                                const SvcOptions& svc, std::uint64_t bootstrap_seed,
                                int bootstrap_samples) {
  if (splits.train.empty() || splits.validation.empty() || splits.test.empty()) {
    throw DataError("ablation requires non-empty train, validation, and test splits");
  }

  const LabeledMatrix train = build_matrix(splits.train, r);
  const LabeledMatrix validation = build_matrix(splits.validation, r);
  const LabeledMatrix test = build_matrix(splits.test, r);

  auto to_gold = [](const Eigen::VectorXi& y) {
    return std::vector<int>(y.begin(), y.end());
  };
  const std::vector<int> gold_validation = to_gold(validation.y);
  const std::vector<int> gold_test = to_gold(test.y);

  std::vector<AblationRow> rows;
  for (unsigned mask = 1; mask <= kFullSubsetMask; ++mask) {
    AblationRow row;
    row.subset = subset_label(mask);
    try {
      const auto cols = subset_columns(mask);
      const Eigen::MatrixXd x_train = select_columns(train.X, cols);
      const Eigen::VectorXd scales = fit_column_scales(x_train);

      SvmProblem problem;
      problem.X = x_train * scales.asDiagonal();
      problem.y = (2 * train.y.cast<double>().array() - 1.0).matrix();
      const SvcSolution sol = train_svc(problem, svc);
      const Eigen::VectorXd weights = clip_negative(sol.weights);

      const auto preds_validation =
          predict_rows(select_columns(validation.X, cols), scales, weights, sol.intercept);
      const auto preds_test =
          predict_rows(select_columns(test.X, cols), scales, weights, sol.intercept);

      row.validation_f1 = macro_f1(preds_validation, gold_validation).f1_macro;
      row.validation_sem =
          bootstrap_sem(preds_validation, gold_validation, bootstrap_samples, bootstrap_seed);
      row.test_f1 = macro_f1(preds_test, gold_test).f1_macro;
      row.test_sem = bootstrap_sem(preds_test, gold_test, bootstrap_samples, bootstrap_seed);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dattr
