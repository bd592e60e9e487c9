#include "dattr/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dattr/errors.hpp"

namespace dattr {
namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool is_integer_token(const std::string& tok) {
  if (tok.empty()) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path.string());

  EmbeddingStore store;
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  long line_no = 0;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    // Optional header: a first line of exactly two integers.
    if (first_content_line && tokens.size() == 2 && is_integer_token(tokens[0]) &&
        is_integer_token(tokens[1])) {
      first_content_line = false;
      continue;
    }
    first_content_line = false;

    const Eigen::Index d = static_cast<Eigen::Index>(tokens.size()) - 1;
    if (d < 1) {
      throw DataError("embedding line " + std::to_string(line_no) +
                      " has no vector components: " + path.string());
    }
    if (store.dim == 0) {
      store.dim = d;
    } else if (d != store.dim) {
      throw DataError("embedding dimension mismatch at line " +
                      std::to_string(line_no) + " (expected " +
                      std::to_string(store.dim) + ", got " + std::to_string(d) +
                      "): " + path.string());
    }

    if (store.vocab.contains(tokens[0])) continue;  // first occurrence wins

    Eigen::VectorXd v(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      double x;
      if (!parse_double(tokens[static_cast<std::size_t>(j) + 1], x)) {
        throw DataError("non-numeric embedding component at line " +
                        std::to_string(line_no) + ": '" +
                        tokens[static_cast<std::size_t>(j) + 1] + "'");
      }
      v[j] = x;
    }
    store.vocab.emplace(tokens[0], static_cast<Eigen::Index>(rows.size()));
    rows.push_back(std::move(v));
  }

  if (rows.empty()) throw DataError("embedding file has no data rows: " + path.string());

  store.matrix.resize(static_cast<Eigen::Index>(rows.size()), store.dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    store.matrix.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return store;
}

std::vector<std::string> lookup_candidates(const std::string& term) {
  std::vector<std::string> out;
  auto push = [&out](std::string s) {
    if (s.empty()) return;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };

  const std::string raw = trim(term);
  if (raw.empty()) return out;
  push(raw);

  const std::string lower = to_lower(raw);
  push(lower);

  std::string joined = lower;
  std::replace(joined.begin(), joined.end(), ' ', '_');
  push(joined);

  // De-pluralize the last word of the normalized form.
  const auto sep = joined.rfind('_');
  const std::string prefix = sep == std::string::npos ? "" : joined.substr(0, sep + 1);
  const std::string last = sep == std::string::npos ? joined : joined.substr(sep + 1);

  if (last.size() > 3 && last.ends_with("ies")) {
    push(prefix + last.substr(0, last.size() - 3) + "y");
  }
  if (last.size() > 2 && last.ends_with("es")) {
    push(prefix + last.substr(0, last.size() - 2));
  }
  if (last.size() > 1 && last.ends_with("s")) {
    push(prefix + last.substr(0, last.size() - 1));
  }
  return out;
}

TermVector lookup(const EmbeddingStore& store, const std::string& term) {
  for (const auto& candidate : lookup_candidates(term)) {
    auto it = store.vocab.find(candidate);
    if (it != store.vocab.end()) {
      return TermVector{store.matrix.row(it->second).transpose(), true};
    }
  }
  return TermVector{Eigen::VectorXd::Zero(store.dim), false};
}

double sqrt_cosine(const EmbeddingStore& store, const std::string& a,
                   const std::string& b) {
  const TermVector va = lookup(store, a);
  if (!va.found) return 0.0;
  const TermVector vb = lookup(store, b);
  if (!vb.found) return 0.0;

  const double na = va.values.norm();
  const double nb = vb.values.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;

  const double cos = va.values.dot(vb.values) / (na * nb);
  return std::sqrt(std::max(cos, 0.0));
}

}  // namespace dattr
