#include "dattr/dataset.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "dattr/errors.hpp"
#include "dattr/features.hpp"

namespace dattr {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fields;
}

int parse_label(const std::string& field, long line_no, const std::string& file) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw DataError("line " + std::to_string(line_no) + " of " + file +
                  ": label must be 0 or 1, got '" + field + "'");
}

Triple parse_triple(const std::string& line, long line_no, const std::string& file) {
  const auto fields = split_csv(line);
  if (fields.size() != 3 && fields.size() != 4) {
    throw DataError("line " + std::to_string(line_no) + " of " + file +
                    ": expected 3 or 4 comma-separated fields, got " +
                    std::to_string(fields.size()));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (fields[i].empty()) {
      throw DataError("line " + std::to_string(line_no) + " of " + file +
                      ": empty field " + std::to_string(i + 1));
    }
  }
  Triple t{fields[0], fields[1], fields[2], std::nullopt};
  if (fields.size() == 4) t.label = parse_label(fields[3], line_no, file);
  return t;
}

}  // namespace

std::vector<Triple> load_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open task file: " + path.string());

  std::vector<Triple> triples;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    triples.push_back(parse_triple(line, line_no, path.string()));
  }
  return triples;
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<PredictionRecord>& records,
                           const std::string& stamp) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write predictions file: " + path.string());
  out << "# " << stamp << "\n";
  for (const auto& rec : records) {
    out << rec.triple.term1 << ',' << rec.triple.term2 << ',' << rec.triple.attribute
        << ',' << rec.predicted << "\n";
  }
  if (!out) throw DataError("failed writing predictions file: " + path.string());
}

std::vector<Triple> load_predictions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open predictions file: " + path.string());

  std::vector<Triple> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    Triple t = parse_triple(line, line_no, path.string());
    if (!t.label.has_value()) {
      throw DataError("line " + std::to_string(line_no) + " of " + path.string() +
                      ": prediction row lacks the predicted column");
    }
    rows.push_back(std::move(t));
  }
  return rows;
}

void write_feature_csv(const std::filesystem::path& path, const Eigen::MatrixXd& x,
                       const Eigen::VectorXi& y, const std::string& stamp) {
  if (x.cols() != kFeatureCount) {
    throw DataError("feature matrix must have " + std::to_string(kFeatureCount) +
                    " columns");
  }
  const bool labeled = y.size() > 0;
  if (labeled && y.size() != x.rows()) {
    throw DataError("label vector length does not match feature matrix rows");
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write feature file: " + path.string());
  out << "# " << stamp << "\n";
  for (int j = 0; j < kFeatureCount; ++j) {
    out << (j == 0 ? "" : ",") << kFeatureNames[static_cast<std::size_t>(j)];
  }
  if (labeled) out << ",label";
  out << "\n";

  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out << (j == 0 ? "" : ",") << x(i, j);
    }
    if (labeled) out << ',' << y[i];
    out << "\n";
  }
  if (!out) throw DataError("failed writing feature file: " + path.string());
}

}  // namespace dattr
