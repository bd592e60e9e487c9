#include <doctest.h>

#include <cmath>

#include "dattr/errors.hpp"
#include "dattr/lexical.hpp"
#include "dattr/rng.hpp"
#include "test_util.hpp"

using namespace dattr;
using dattr::testing::TempDir;
using dattr::testing::make_store;
using dattr::testing::write_file;

namespace {

// att=(1,0); tokens at known cosines to it.
EmbeddingStore similarity_store() {
  Eigen::VectorXd att(2), tok30(2), tok70(2), frog(2);
  att << 1, 0;
  tok30 << 0.09, std::sqrt(1 - 0.09 * 0.09);   // sqrt_cosine = 0.3
  tok70 << 0.49, std::sqrt(1 - 0.49 * 0.49);   // sqrt_cosine = 0.7
  frog << 0.04, std::sqrt(1 - 0.04 * 0.04);    // sqrt_cosine = 0.2
  return make_store({{"att", att}, {"low", tok30}, {"high", tok70}, {"frog", frog}});
}

}  // namespace

TEST_CASE("lead_max_similarity picks the best lead token") {
  const auto store = similarity_store();
  LeadSectionCorpus corpus;
  corpus.entries["frog"] = {"low", "high"};
  CHECK(lead_max_similarity(corpus, store, "frog", "att") ==
        doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("lead_max_similarity hits 1 when the attribute word appears") {
  const auto store = similarity_store();
  LeadSectionCorpus corpus;
  corpus.entries["frog"] = {"att", "low"};
  CHECK(lead_max_similarity(corpus, store, "frog", "att") ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lead_max_similarity falls back to term similarity") {
  const auto store = similarity_store();
  LeadSectionCorpus corpus;  // no entry for frog
  CHECK(lead_max_similarity(corpus, store, "frog", "att") ==
        doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("lead_max_similarity counts title words and resolves plurals") {
  const auto store = similarity_store();
  LeadSectionCorpus corpus;
  corpus.entries["high"] = {"low"};  // title itself scores 0.7
  CHECK(lead_max_similarity(corpus, store, "Highs", "att") ==
        doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("lead monotonicity: adding a token never lowers the maximum") {
  const auto store = similarity_store();
  LeadSectionCorpus small;
  small.entries["frog"] = {"low"};
  LeadSectionCorpus big;
  big.entries["frog"] = {"low", "high"};
  CHECK(lead_max_similarity(big, store, "frog", "att") >=
        lead_max_similarity(small, store, "frog", "att"));
}

TEST_CASE("lexicon_max_similarity expands through the entry") {
  const auto store = similarity_store();
  Lexicon lex;

  SUBCASE("absent entry = plain similarity") {
    CHECK(lexicon_max_similarity(lex, store, "frog", "att") ==
          doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("expansion maximum wins") {
    lex.entries["frog"] = LexiconEntry{{"high"}, {}, {}};
    CHECK(lexicon_max_similarity(lex, store, "frog", "att") ==
          doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("gloss containing the attribute gives 1") {
    lex.entries["frog"] = LexiconEntry{{}, {}, {"att"}};
    CHECK(lexicon_max_similarity(lex, store, "frog", "att") ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("related words participate too") {
    lex.entries["frog"] = LexiconEntry{{}, {"low"}, {}};
    CHECK(lexicon_max_similarity(lex, store, "frog", "att") ==
          doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("ngram_significance matches the closed form") {
  NgramCounts counts;
  SUBCASE("all counts zero") {
    CHECK(ngram_significance(counts, "t", "a") == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("bigram 999 with zero unigrams") {
    counts.bigrams["t a"] = 999;
    CHECK(ngram_significance(counts, "t", "a") == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("frequent unigram cancels the bigram") {
    counts.bigrams["t a"] = 9;
    counts.unigrams["t"] = 900000;
    CHECK(ngram_significance(counts, "t", "a") == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("ordered pair only") {
    counts.bigrams["a t"] = 999;  // reversed order must not count
    CHECK(ngram_significance(counts, "t", "a") == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("ngram_significance monotonicity") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    NgramCounts counts;
    const long long bi = static_cast<long long>(rng.uniform_index(100000));
    const long long ut = static_cast<long long>(rng.uniform_index(1000000));
    const long long ua = static_cast<long long>(rng.uniform_index(1000000));
    counts.bigrams["t a"] = bi;
    counts.unigrams["t"] = ut;
    counts.unigrams["a"] = ua;
    const double base = ngram_significance(counts, "t", "a");

    counts.bigrams["t a"] = bi + 1;
    CHECK(ngram_significance(counts, "t", "a") > base);
    counts.bigrams["t a"] = bi;

    counts.unigrams["t"] = ut + 1;
    CHECK(ngram_significance(counts, "t", "a") < base);
    counts.unigrams["t"] = ut;

    counts.unigrams["a"] = ua + 1;
    CHECK(ngram_significance(counts, "t", "a") < base);
    counts.unigrams["a"] = ua;

    // Unrelated entries leave the value untouched.
    counts.unigrams["other"] = 123456;
    counts.bigrams["x y"] = 999;
    CHECK(ngram_significance(counts, "t", "a") == base);
  }
}

TEST_CASE("resource loaders parse the documented formats") {
  TempDir tmp("lexical-load");

  SUBCASE("lead sections") {
    const auto path =
        write_file(tmp.path() / "leads.tsv", "frog\tsmall amphibian pond\nsnail\tshell\n");
    const auto corpus = load_lead_sections(path);
    REQUIRE(corpus.entries.size() == 2);
    CHECK(corpus.entries.at("frog").size() == 3);
    CHECK(corpus.entries.at("frog")[1] == "amphibian");
  }
  SUBCASE("lead section without TAB fails") {
    const auto path = write_file(tmp.path() / "leads.tsv", "frog no tab here\n");
    CHECK_THROWS_AS(load_lead_sections(path), DataError);
  }
  SUBCASE("lexicon JSONL") {
    const auto path = write_file(
        tmp.path() / "lex.jsonl",
        R"({"word": "frog", "synonyms": ["toad"], "related": ["amphibian"], "gloss_words": ["tailless", "animal"]})"
        "\n");
    const auto lex = load_lexicon(path);
    REQUIRE(lex.entries.contains("frog"));
    CHECK(lex.entries.at("frog").synonyms == std::vector<std::string>{"toad"});
    CHECK(lex.entries.at("frog").gloss_words.size() == 2);
  }
  SUBCASE("lexicon bad JSON names the line") {
    const auto path = write_file(tmp.path() / "lex.jsonl", "{\"word\": \"a\"}\nnot json\n");
    CHECK_THROWS_WITH_AS(load_lexicon(path), doctest::Contains("line 2"), DataError);
  }
  SUBCASE("ngram counts") {
    const auto uni = write_file(tmp.path() / "uni.tsv", "frog\t1200\nlegs\t800\n");
    const auto bi = write_file(tmp.path() / "bi.tsv", "frog legs\t55\n");
    const auto counts = load_ngram_counts(uni, bi);
    CHECK(counts.unigrams.at("frog") == 1200);
    CHECK(counts.bigrams.at("frog legs") == 55);
  }
  SUBCASE("negative count rejected") {
    const auto uni = write_file(tmp.path() / "uni.tsv", "frog\t-3\n");
    const auto bi = write_file(tmp.path() / "bi.tsv", "");
    CHECK_THROWS_AS(load_ngram_counts(uni, bi), DataError);
  }
  SUBCASE("bigram key must contain one space") {
    const auto uni = write_file(tmp.path() / "uni.tsv", "");
    const auto bi = write_file(tmp.path() / "bi.tsv", "frog\t55\n");
    CHECK_THROWS_AS(load_ngram_counts(uni, bi), DataError);
  }
}
