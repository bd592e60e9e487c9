#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "dattr/embeddings.hpp"

namespace dattr {

// Lead-section words per article title, lowercased in the source file.
struct LeadSectionCorpus {
  std::unordered_map<std::string, std::vector<std::string>> entries;
};

struct LexiconEntry {
  std::vector<std::string> synonyms;
  std::vector<std::string> related;      // words from connected synsets
  std::vector<std::string> gloss_words;  // words of the definition
};

struct Lexicon {
  std::unordered_map<std::string, LexiconEntry> entries;
};

// Missing keys denote count 0. Bigram keys are "token1 token2".
struct NgramCounts {
  std::unordered_map<std::string, long long> unigrams;
  std::unordered_map<std::string, long long> bigrams;
};

// TSV: title TAB space-separated lowercase tokens.
LeadSectionCorpus load_lead_sections(const std::filesystem::path& path);

// JSON Lines: {"word": str, "synonyms": [...], "related": [...],
// "gloss_words": [...]} per line.
Lexicon load_lexicon(const std::filesystem::path& path);

// Unigrams: "token TAB count". Bigrams: "token1 token2 TAB count".
NgramCounts load_ngram_counts(const std::filesystem::path& unigram_path,
                              const std::filesystem::path& bigram_path);

// Max sqrt_cosine between att and any title or lead-section token of the
// article for term (resolved through the lookup candidate chain); falls back
// to sqrt_cosine(term, att) when no article exists.
double lead_max_similarity(const LeadSectionCorpus& corpus,
                           const EmbeddingStore& store, const std::string& term,
                           const std::string& att);

// Max sqrt_cosine between att and {term} + synonyms + related + gloss words.
double lexicon_max_similarity(const Lexicon& lex, const EmbeddingStore& store,
                              const std::string& term, const std::string& att);

// Smoothed log-likelihood of the ordered two-word phrase (term, att):
// 10 + log10(#(term,att) + 1) - log10((#(term) + 1e5) * (#(att) + 1e5)).
double ngram_significance(const NgramCounts& counts, const std::string& term,
                          const std::string& att);

}  // namespace dattr
