#include "dattr/features.hpp"

#include "dattr/errors.hpp"

namespace dattr {

double vector_similarity_feature(const EmbeddingStore& store, const Triple& t) {
  return sqrt_cosine(store, t.term1, t.attribute) -
         sqrt_cosine(store, t.term2, t.attribute);
}

FeatureVector extract(const Triple& t, const ResourceBundle& r) {
  FeatureVector f;
  f[0] = vector_similarity_feature(r.embeddings, t);
  f.segment(1, 11) = sme_features(r.sme, t);
  f[12] = lead_max_similarity(r.leads, r.embeddings, t.term1, t.attribute) -
          lead_max_similarity(r.leads, r.embeddings, t.term2, t.attribute);
  f[13] = lexicon_max_similarity(r.lexicon, r.embeddings, t.term1, t.attribute) -
          lexicon_max_similarity(r.lexicon, r.embeddings, t.term2, t.attribute);
  f[14] = ngram_significance(r.ngrams, t.term1, t.attribute) -
          ngram_significance(r.ngrams, t.term2, t.attribute);
  return f;
}

Eigen::MatrixXd build_feature_matrix(const std::vector<Triple>& triples,
                                     const ResourceBundle& r) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(triples.size()), kFeatureCount);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = extract(triples[i], r).transpose();
  }
  return X;
}

LabeledMatrix build_matrix(const std::vector<Triple>& triples,
                           const ResourceBundle& r) {
  LabeledMatrix out;
  out.y.resize(static_cast<Eigen::Index>(triples.size()));
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (!triples[i].label.has_value()) {
      throw DataError("triple " + std::to_string(i + 1) + " (" + triples[i].term1 +
                      ", " + triples[i].term2 + ", " + triples[i].attribute +
                      ") has no label");
    }
    out.y[static_cast<Eigen::Index>(i)] = *triples[i].label;
  }
  out.X = build_feature_matrix(triples, r);
  return out;
}

}  // namespace dattr
