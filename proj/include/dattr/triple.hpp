#pragma once

#include <optional>
#include <string>

namespace dattr {

// One task instance: does `attribute` discriminate term1 from term2?
// label 1 = discriminative, 0 = not; absent for prediction-only data.
struct Triple {
  std::string term1;
  std::string term2;
  std::string attribute;
  std::optional<int> label;
};

}  // namespace dattr
