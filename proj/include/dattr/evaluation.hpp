#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dattr/classifier.hpp"
#include "dattr/features.hpp"

namespace dattr {

struct EvalReport {
  double f1_positive = 0.0;
  double f1_negative = 0.0;
  double f1_macro = 0.0;
  double sem = 0.0;
  int n = 0;
  std::string split;
};

// Macro-averaged F1, each class scored as the positive class in turn.
// A class with an empty precision or recall denominator scores 0, except a
// class absent from both gold and predictions, which scores 1. sem is left 0.
EvalReport macro_f1(const std::vector<int>& predictions, const std::vector<int>& gold);

inline constexpr int kDefaultBootstrapSamples = 1000;

// Sample standard deviation of macro F1 over B seeded resamples with
// replacement.
double bootstrap_sem(const std::vector<int>& predictions, const std::vector<int>& gold,
                     int samples, std::uint64_t seed);

// Feature sources of the ablation: A = vector similarity, B = SME,
// C = Wikipedia leads, D = lexicon relatedness, E = n-gram significance.
inline constexpr unsigned kSourceCount = 5;
inline constexpr unsigned kFullSubsetMask = (1u << kSourceCount) - 1;

// Letters of the sources present in mask (bit 0 = A .. bit 4 = E).
std::string subset_label(unsigned mask);

// Feature-matrix column indices covered by the sources in mask.
std::vector<int> subset_columns(unsigned mask);

struct AblationRow {
  std::string subset;
  std::optional<double> validation_f1;
  std::optional<double> validation_sem;
  std::optional<double> test_f1;
  std::optional<double> test_sem;
  std::string error;  // empty when the fit succeeded
};

struct AblationInputs {
  const std::vector<Triple>& train;
  const std::vector<Triple>& validation;
  const std::vector<Triple>& test;
};

// Retrains scale-fit + SVC + clip per non-empty source subset; emits the 31
// rows in bitmask order. Per-subset failures are recorded in the row.
std::vector<AblationRow> ablate(const AblationInputs& splits, const ResourceBundle& r,
                                const SvcOptions& svc, std::uint64_t bootstrap_seed,
                                int bootstrap_samples = kDefaultBootstrapSamples);

}  // namespace dattr
