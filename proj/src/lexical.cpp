#include "dattr/lexical.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dattr/errors.hpp"

namespace dattr {
namespace {

bool parse_count(const std::string& tok, long long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && out >= 0;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Title words count as lead words; titles may be spaced or underscored.
std::vector<std::string> title_tokens(const std::string& title) {
  std::string spaced = title;
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  auto toks = split_tokens(spaced);
  for (auto& t : toks) t = lower(t);
  return toks;
}

std::vector<std::string> json_string_array(const nlohmann::json& obj,
                                           const char* key, long line_no) {
  if (!obj.contains(key)) return {};
  const auto& arr = obj.at(key);
  if (!arr.is_array()) {
    throw DataError("lexicon line " + std::to_string(line_no) + ": '" + key +
                    "' is not an array");
  }
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw DataError("lexicon line " + std::to_string(line_no) + ": '" + key +
                      "' contains a non-string entry");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

LeadSectionCorpus load_lead_sections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lead-section file: " + path.string());

  LeadSectionCorpus corpus;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("lead-section line " + std::to_string(line_no) +
                      " has no TAB separator: " + path.string());
    }
    std::string title = line.substr(0, tab);
    if (title.empty()) {
      throw DataError("lead-section line " + std::to_string(line_no) +
                      " has an empty title");
    }
    auto tokens = split_tokens(line.substr(tab + 1));
    corpus.entries.emplace(std::move(title), std::move(tokens));
  }
  return corpus;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path.string());

  Lexicon lex;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("lexicon line " + std::to_string(line_no) +
                      " is not valid JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("word") || !obj["word"].is_string()) {
      throw DataError("lexicon line " + std::to_string(line_no) +
                      " lacks a string 'word' key");
    }
    std::string word = obj["word"].get<std::string>();
    if (word.empty()) {
      throw DataError("lexicon line " + std::to_string(line_no) +
                      " has an empty 'word'");
    }
    LexiconEntry entry;
    entry.synonyms = json_string_array(obj, "synonyms", line_no);
    entry.related = json_string_array(obj, "related", line_no);
    entry.gloss_words = json_string_array(obj, "gloss_words", line_no);
    lex.entries.emplace(std::move(word), std::move(entry));  // first wins
  }
  return lex;
}

NgramCounts load_ngram_counts(const std::filesystem::path& unigram_path,
                              const std::filesystem::path& bigram_path) {
  NgramCounts counts;

  auto load_file = [](const std::filesystem::path& path, bool bigram,
                      std::unordered_map<std::string, long long>& into) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open n-gram count file: " + path.string());
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw DataError("n-gram line " + std::to_string(line_no) +
                        " has no TAB separator: " + path.string());
      }
      std::string key = line.substr(0, tab);
      const std::size_t spaces = static_cast<std::size_t>(
          std::count(key.begin(), key.end(), ' '));
      if (bigram ? spaces != 1 : spaces != 0) {
        throw DataError("n-gram line " + std::to_string(line_no) +
                        " has a malformed key '" + key + "': " + path.string());
      }
      long long value = 0;
      if (!parse_count(line.substr(tab + 1), value)) {
        throw DataError("n-gram line " + std::to_string(line_no) +
                        " has a non-numeric or negative count: " + path.string());
      }
      into.emplace(std::move(key), value);  // first wins
    }
  };

  load_file(unigram_path, false, counts.unigrams);
  load_file(bigram_path, true, counts.bigrams);
  return counts;
}

double lead_max_similarity(const LeadSectionCorpus& corpus,
                           const EmbeddingStore& store, const std::string& term,
                           const std::string& att) {
  for (const auto& candidate : lookup_candidates(term)) {
    auto it = corpus.entries.find(candidate);
    if (it == corpus.entries.end()) continue;

    double best = 0.0;
    for (const auto& tok : title_tokens(it->first)) {
      best = std::max(best, sqrt_cosine(store, att, tok));
    }
    for (const auto& tok : it->second) {
      best = std::max(best, sqrt_cosine(store, att, tok));
    }
    return best;
  }
  return sqrt_cosine(store, term, att);
}

double lexicon_max_similarity(const Lexicon& lex, const EmbeddingStore& store,
                              const std::string& term, const std::string& att) {
  double best = sqrt_cosine(store, att, term);

  const LexiconEntry* entry = nullptr;
  for (const auto& candidate : lookup_candidates(term)) {
    auto it = lex.entries.find(candidate);
    if (it != lex.entries.end()) {
      entry = &it->second;
      break;
    }
  }
  if (entry == nullptr) return best;

  for (const auto* list : {&entry->synonyms, &entry->related, &entry->gloss_words}) {
    for (const auto& word : *list) {
      best = std::max(best, sqrt_cosine(store, att, word));
    }
  }
  return best;
}

double ngram_significance(const NgramCounts& counts, const std::string& term,
                          const std::string& att) {
  auto count_of = [](const std::unordered_map<std::string, long long>& m,
                     const std::string& key) -> double {
    auto it = m.find(key);
    return it == m.end() ? 0.0 : static_cast<double>(it->second);
  };

  const double pair = count_of(counts.bigrams, term + " " + att);
  const double t = count_of(counts.unigrams, term);
  const double a = count_of(counts.unigrams, att);
  return 10.0 + std::log10(pair + 1.0) - std::log10((t + 1e5) * (a + 1e5));
}

}  // namespace dattr
