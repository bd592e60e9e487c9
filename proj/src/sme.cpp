#include "dattr/sme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dattr/errors.hpp"

namespace dattr {
namespace {

// Scores are kept strictly inside (0, 1) so the cross-entropy stays finite.
constexpr double kScoreClamp = 1e-12;

double clamp_score(double p) {
  return std::min(std::max(p, kScoreClamp), 1.0 - kScoreClamp);
}

double energy(const SmeModel& model, int rel, const Eigen::VectorXd& head,
              const Eigen::VectorXd& tail) {
  double e = model.relation_bias[rel];
  for (int k = 0; k < kRelationEmbeddingDim; ++k) {
    e += model.relation_embeddings(rel, k) *
         head.dot(model.interaction[static_cast<std::size_t>(k)] * tail);
  }
  return e;
}

}  // namespace

RelationSchema::RelationSchema(std::vector<RelationSpec> relations)
    : relations_(std::move(relations)) {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& rel = relations_[i];
    if (rel.name.empty()) throw DataError("schema relation with empty name");
    if (!index_.emplace(rel.name, static_cast<int>(i)).second) {
      throw DataError("duplicate relation in schema: " + rel.name);
    }
  }
  for (const auto& rel : relations_) {
    for (const auto& parent : rel.entails) {
      if (!index_.contains(parent)) {
        throw DataError("relation '" + rel.name + "' entails unknown relation '" +
                        parent + "'");
      }
      if (parent == rel.name) {
        throw DataError("relation '" + rel.name + "' entails itself");
      }
    }
  }

  // Transitive closure of entailment per relation.
  entailed_.resize(relations_.size());
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    std::vector<bool> seen(relations_.size(), false);
    std::deque<int> frontier{static_cast<int>(i)};
    while (!frontier.empty()) {
      const int r = frontier.front();
      frontier.pop_front();
      for (const auto& parent : relations_[static_cast<std::size_t>(r)].entails) {
        const int p = index_.at(parent);
        if (p == static_cast<int>(i)) {
          throw DataError("entailment cycle through relation '" +
                          relations_[i].name + "'");
        }
        if (!seen[static_cast<std::size_t>(p)]) {
          seen[static_cast<std::size_t>(p)] = true;
          frontier.push_back(p);
        }
      }
    }
    for (std::size_t p = 0; p < seen.size(); ++p) {
      if (seen[p]) entailed_[i].push_back(static_cast<int>(p));
    }
  }
}

int RelationSchema::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

RelationSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file: " + path.string());

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("schema file is not valid JSON: " + path.string() + ": " +
                    e.what());
  }
  if (!doc.is_object() || !doc.contains("relations") || !doc["relations"].is_array()) {
    throw DataError("schema file lacks a 'relations' array: " + path.string());
  }

  std::vector<RelationSpec> specs;
  for (const auto& item : doc["relations"]) {
    RelationSpec spec;
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string()) {
      throw DataError("schema relation lacks a string 'name': " + path.string());
    }
    spec.name = item["name"].get<std::string>();
    spec.symmetric = item.value("symmetric", false);
    if (item.contains("entails")) {
      for (const auto& e : item["entails"]) {
        if (!e.is_string()) {
          throw DataError("schema relation '" + spec.name +
                          "' has a non-string entails entry");
        }
        spec.entails.push_back(e.get<std::string>());
      }
    }
    specs.push_back(std::move(spec));
  }
  return RelationSchema(std::move(specs));
}

RelationSchema default_schema(const std::vector<std::string>& extra_relations) {
  std::vector<RelationSpec> specs;
  for (const auto name : kFeatureRelations) {
    RelationSpec spec;
    spec.name = std::string(name);
    if (spec.name == "RelatedTo") {
      spec.symmetric = true;
    } else {
      spec.entails = {"RelatedTo"};
    }
    specs.push_back(std::move(spec));
  }
  for (const auto& name : extra_relations) {
    if (std::any_of(specs.begin(), specs.end(),
                    [&](const RelationSpec& s) { return s.name == name; })) {
      continue;
    }
    specs.push_back(RelationSpec{name, false, {"RelatedTo"}});
  }
  return RelationSchema(std::move(specs));
}

KnowledgeGraph load_edges(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge file: " + path.string());

  KnowledgeGraph kg;
  std::unordered_map<std::string, bool> seen_node;
  auto add_node = [&](const std::string& n) {
    if (!seen_node.emplace(n, true).second) return;
    kg.nodes.push_back(n);
  };

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw DataError("edge line " + std::to_string(line_no) +
                      " is not 'relation TAB head TAB tail': " + path.string());
    }
    add_node(fields[1]);
    add_node(fields[2]);
    kg.edges.push_back(EdgeTriple{fields[0], fields[1], fields[2]});
  }
  return kg;
}

void validate_graph(const KnowledgeGraph& kg, const RelationSchema& schema) {
  std::unordered_map<std::string, bool> nodes;
  for (const auto& n : kg.nodes) nodes.emplace(n, true);
  for (std::size_t i = 0; i < kg.edges.size(); ++i) {
    const auto& e = kg.edges[i];
    if (schema.index_of(e.relation) < 0) {
      throw DataError("edge " + std::to_string(i + 1) + " uses relation '" +
                      e.relation + "' absent from the schema");
    }
    if (!nodes.contains(e.head) || !nodes.contains(e.tail)) {
      throw DataError("edge " + std::to_string(i + 1) +
                      " references a term absent from the node set");
    }
  }
}

std::vector<EdgeTriple> expand_positives(const KnowledgeGraph& kg,
                                         const RelationSchema& schema) {
  std::vector<EdgeTriple> out;
  std::set<EdgeTriple> seen;
  std::deque<EdgeTriple> frontier;

  auto add = [&](EdgeTriple t) {
    if (!seen.insert(t).second) return;
    out.push_back(t);
    frontier.push_back(std::move(t));
  };

  for (const auto& e : kg.edges) add(e);

  // Fixpoint: generalizations and symmetric reversals of derived edges are
  // positives too, so applying the rules again adds nothing.
  while (!frontier.empty()) {
    const EdgeTriple cur = frontier.front();
    frontier.pop_front();
    const int rel = schema.index_of(cur.relation);
    if (rel < 0) {
      throw DataError("edge relation '" + cur.relation + "' absent from schema");
    }
    for (int parent : schema.entailed(rel)) {
      add(EdgeTriple{schema.at(parent).name, cur.head, cur.tail});
    }
    if (schema.at(rel).symmetric) {
      add(EdgeTriple{cur.relation, cur.tail, cur.head});
    }
  }
  return out;
}

CorruptionContext::CorruptionContext(const KnowledgeGraph& kg,
                                     const RelationSchema& schema_in)
    : schema(&schema_in), nodes(kg.nodes) {
  auto expanded = expand_positives(kg, schema_in);
  positives.insert(expanded.begin(), expanded.end());

  replacements.resize(schema_in.size());
  for (std::size_t r = 0; r < schema_in.size(); ++r) {
    std::vector<bool> excluded(schema_in.size(), false);
    excluded[r] = true;
    for (int e : schema_in.entailed(static_cast<int>(r))) {
      excluded[static_cast<std::size_t>(e)] = true;
    }
    for (std::size_t s = 0; s < schema_in.size(); ++s) {
      if (!excluded[s]) replacements[r].push_back(schema_in.at(static_cast<int>(s)).name);
    }
  }
}

namespace {

enum class CorruptionKind { kReplaceHead, kReplaceTail, kReplaceRelation, kFlip };

// Uniform draw over nodes, excluding `current` when it is a known node.
std::string random_other_node(const std::vector<std::string>& nodes,
                              const std::string& current, SplitMix64& rng) {
  auto it = std::find(nodes.begin(), nodes.end(), current);
  if (it == nodes.end()) return nodes[rng.uniform_index(nodes.size())];
  const std::size_t cur = static_cast<std::size_t>(it - nodes.begin());
  std::size_t j = rng.uniform_index(nodes.size() - 1);
  if (j >= cur) ++j;
  return nodes[j];
}

}  // namespace

EdgeTriple corrupt(const EdgeTriple& positive, const CorruptionContext& ctx,
                   SplitMix64& rng) {
  const int rel = ctx.schema->index_of(positive.relation);
  if (rel < 0) {
    throw DataError("cannot corrupt triple with unknown relation '" +
                    positive.relation + "'");
  }

  std::vector<CorruptionKind> kinds;
  if (ctx.nodes.size() >= 2) {
    kinds.push_back(CorruptionKind::kReplaceHead);
    kinds.push_back(CorruptionKind::kReplaceTail);
  }
  if (!ctx.replacements[static_cast<std::size_t>(rel)].empty()) {
    kinds.push_back(CorruptionKind::kReplaceRelation);
  }
  if (!ctx.schema->at(rel).symmetric) {
    kinds.push_back(CorruptionKind::kFlip);
  }
  if (kinds.empty()) {
    throw NumericalError("no corruption kind applicable to triple (" +
                         positive.relation + ", " + positive.head + ", " +
                         positive.tail + ")");
  }

  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const CorruptionKind kind = kinds[rng.uniform_index(kinds.size())];
    EdgeTriple candidate = positive;
    switch (kind) {
      case CorruptionKind::kReplaceHead:
        candidate.head = random_other_node(ctx.nodes, positive.head, rng);
        break;
      case CorruptionKind::kReplaceTail:
        candidate.tail = random_other_node(ctx.nodes, positive.tail, rng);
        break;
      case CorruptionKind::kReplaceRelation: {
        const auto& pool = ctx.replacements[static_cast<std::size_t>(rel)];
        candidate.relation = pool[rng.uniform_index(pool.size())];
        break;
      }
      case CorruptionKind::kFlip:
        std::swap(candidate.head, candidate.tail);
        break;
    }
    if (!ctx.positives.contains(candidate)) return candidate;
  }

  // Fallback: term replacement only.
  if (ctx.nodes.size() >= 2) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      EdgeTriple candidate = positive;
      if (rng.uniform_index(2) == 0) {
        candidate.head = random_other_node(ctx.nodes, positive.head, rng);
      } else {
        candidate.tail = random_other_node(ctx.nodes, positive.tail, rng);
      }
      if (!ctx.positives.contains(candidate)) return candidate;
    }
  }
  throw NumericalError("negative sampling exhausted for triple (" +
                       positive.relation + ", " + positive.head + ", " +
                       positive.tail + ")");
}

EdgeTriple corrupt(const EdgeTriple& positive, const KnowledgeGraph& kg,
                   const RelationSchema& schema, SplitMix64& rng) {
  CorruptionContext ctx(kg, schema);
  return corrupt(positive, ctx, rng);
}

Eigen::VectorXd SmeModel::term_vector(const std::string& term) const {
  auto it = term_index.find(term);
  if (it == term_index.end()) return Eigen::VectorXd::Zero(term_dim());
  return term_embeddings.row(it->second).transpose();
}

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double score_triple(const SmeModel& model, const std::string& rel,
                    const std::string& head, const std::string& tail) {
  auto it = model.relation_index.find(rel);
  if (it == model.relation_index.end()) {
    throw DataError("unknown relation: " + rel);
  }
  const Eigen::VectorXd h = model.term_vector(head);
  const Eigen::VectorXd t = model.term_vector(tail);
  return clamp_score(logistic(energy(model, it->second, h, t)));
}

double bce_loss(const SmeModel& model, int rel, int head, int tail, double target) {
  const Eigen::VectorXd h = model.term_embeddings.row(head).transpose();
  const Eigen::VectorXd t = model.term_embeddings.row(tail).transpose();
  const double p = clamp_score(logistic(energy(model, rel, h, t)));
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

TripleGradients bce_gradients(const SmeModel& model, int rel, int head, int tail,
                              double target) {
  const Eigen::Index dt = model.term_dim();
  const Eigen::VectorXd h = model.term_embeddings.row(head).transpose();
  const Eigen::VectorXd t = model.term_embeddings.row(tail).transpose();

  TripleGradients g;
  g.head = Eigen::VectorXd::Zero(dt);
  g.tail = Eigen::VectorXd::Zero(dt);
  g.relation = Eigen::VectorXd::Zero(kRelationEmbeddingDim);
  g.slices.assign(kRelationEmbeddingDim, Eigen::MatrixXd::Zero(dt, dt));

  double e = model.relation_bias[rel];
  for (int k = 0; k < kRelationEmbeddingDim; ++k) {
    const auto& slice = model.interaction[static_cast<std::size_t>(k)];
    const double rk = model.relation_embeddings(rel, k);
    const Eigen::VectorXd st = slice * t;
    e += rk * h.dot(st);
    g.relation[k] = h.dot(st);
    g.head += rk * st;
    g.tail += rk * (slice.transpose() * h);
  }

  const double p = clamp_score(logistic(e));
  const double coef = p - target;
  g.loss = -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));

  g.head *= coef;
  g.tail *= coef;
  g.relation *= coef;
  g.bias = coef;
  const Eigen::MatrixXd outer = h * t.transpose();
  for (int k = 0; k < kRelationEmbeddingDim; ++k) {
    g.slices[static_cast<std::size_t>(k)] =
        coef * model.relation_embeddings(rel, k) * outer;
  }
  return g;
}

namespace {

SmeModel init_model(const KnowledgeGraph& kg, const RelationSchema& schema,
                    const SmeHyperparams& hp, const EmbeddingStore* init_from) {
  if (hp.term_dim < 1) throw ConfigError("sme term_dim must be positive");

  SmeModel model;
  model.terms = kg.nodes;
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    model.term_index.emplace(model.terms[i], static_cast<int>(i));
  }
  for (const auto& rel : schema.relations()) {
    model.relation_index.emplace(rel.name, static_cast<int>(model.relations.size()));
    model.relations.push_back(rel.name);
  }

  const Eigen::Index t_count = static_cast<Eigen::Index>(model.terms.size());
  const Eigen::Index r_count = static_cast<Eigen::Index>(model.relations.size());
  const Eigen::Index dt = hp.term_dim;

  model.term_embeddings.resize(t_count, dt);
  model.relation_embeddings.resize(r_count, kRelationEmbeddingDim);
  model.interaction.assign(kRelationEmbeddingDim, Eigen::MatrixXd(dt, dt));
  model.relation_bias = Eigen::VectorXd::Zero(r_count);

  // Fill order is part of the reproducibility contract: term rows, relation
  // rows, then tensor slices, all row-major.
  SplitMix64 rng(hp.seed);
  for (Eigen::Index i = 0; i < t_count; ++i) {
    for (Eigen::Index j = 0; j < dt; ++j) {
      model.term_embeddings(i, j) = rng.uniform(-0.05, 0.05);
    }
  }
  for (Eigen::Index i = 0; i < r_count; ++i) {
    for (Eigen::Index j = 0; j < kRelationEmbeddingDim; ++j) {
      model.relation_embeddings(i, j) = rng.uniform(-0.05, 0.05);
    }
  }
  for (auto& slice : model.interaction) {
    for (Eigen::Index i = 0; i < dt; ++i) {
      for (Eigen::Index j = 0; j < dt; ++j) {
        slice(i, j) = rng.uniform(-0.05, 0.05);
      }
    }
  }

  if (init_from != nullptr) {
    const Eigen::Index copy = std::min<Eigen::Index>(dt, init_from->dim);
    for (std::size_t i = 0; i < model.terms.size(); ++i) {
      const TermVector v = lookup(*init_from, model.terms[i]);
      if (!v.found) continue;
      model.term_embeddings.row(static_cast<Eigen::Index>(i)).head(copy) =
          v.values.head(copy).transpose();
    }
  }
  return model;
}

struct StepExample {
  int rel = 0;
  int head = 0;
  int tail = 0;
  double coef = 0.0;
  Eigen::VectorXd d_head;
  Eigen::VectorXd d_tail;
  Eigen::VectorXd d_rel;
  Eigen::VectorXd e_head;  // pre-step copies
  Eigen::VectorXd e_tail;
  Eigen::VectorXd e_rel;
};

}  // namespace

SmeModel train_sme(const KnowledgeGraph& kg, const RelationSchema& schema,
                   const SmeHyperparams& hp, const EmbeddingStore* init_from,
                   SmeTrainLog* log) {
  if (kg.edges.empty()) throw DataError("knowledge graph has no edges");
  if (hp.learning_rate <= 0.0) throw ConfigError("sme learning_rate must be positive");
  if (hp.negatives_per_positive < 1) {
    throw ConfigError("sme negatives_per_positive must be >= 1");
  }
  validate_graph(kg, schema);

  SmeModel model = init_model(kg, schema, hp, init_from);
  const auto positives = expand_positives(kg, schema);
  const CorruptionContext ctx(kg, schema);

  struct IdxTriple {
    int rel, head, tail;
  };
  auto intern = [&](const EdgeTriple& e) {
    return IdxTriple{model.relation_index.at(e.relation),
                     model.term_index.at(e.head), model.term_index.at(e.tail)};
  };
  std::vector<IdxTriple> pos_idx;
  pos_idx.reserve(positives.size());
  for (const auto& p : positives) pos_idx.push_back(intern(p));

  SplitMix64 rng(hp.seed);
  const std::size_t examples_per_step =
      1 + static_cast<std::size_t>(hp.negatives_per_positive);
  std::vector<StepExample> step(examples_per_step);

  const long long window = 1000;
  double window_loss = 0.0;
  long long window_examples = 0;

  Eigen::VectorXd st(model.term_dim());

  for (long long iter = 1; iter <= hp.iterations; ++iter) {
    const std::size_t pick = rng.uniform_index(positives.size());
    step[0].rel = pos_idx[pick].rel;
    step[0].head = pos_idx[pick].head;
    step[0].tail = pos_idx[pick].tail;
    for (std::size_t n = 1; n < examples_per_step; ++n) {
      const EdgeTriple neg = corrupt(positives[pick], ctx, rng);
      const IdxTriple idx = intern(neg);
      step[n].rel = idx.rel;
      step[n].head = idx.head;
      step[n].tail = idx.tail;
    }

    // Gradients for every example are taken at the pre-step parameters, then
    // applied together.
    for (std::size_t n = 0; n < examples_per_step; ++n) {
      auto& ex = step[n];
      const double target = n == 0 ? 1.0 : 0.0;
      ex.e_head = model.term_embeddings.row(ex.head).transpose();
      ex.e_tail = model.term_embeddings.row(ex.tail).transpose();
      ex.e_rel = model.relation_embeddings.row(ex.rel).transpose();
      ex.d_head.setZero(model.term_dim());
      ex.d_tail.setZero(model.term_dim());
      ex.d_rel.resize(kRelationEmbeddingDim);

      double e = model.relation_bias[ex.rel];
      for (int k = 0; k < kRelationEmbeddingDim; ++k) {
        const auto& slice = model.interaction[static_cast<std::size_t>(k)];
        const double rk = model.relation_embeddings(ex.rel, k);
        st.noalias() = slice * ex.e_tail;
        const double hst = ex.e_head.dot(st);
        e += rk * hst;
        ex.d_rel[k] = hst;
        ex.d_head.noalias() += rk * st;
        ex.d_tail.noalias() += rk * (slice.transpose() * ex.e_head);
      }
      const double p = clamp_score(logistic(e));
      ex.coef = p - target;
      window_loss += -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
      ++window_examples;
    }

    const double lr = hp.learning_rate;
    for (const auto& ex : step) {
      model.term_embeddings.row(ex.head).noalias() -=
          (lr * ex.coef) * ex.d_head.transpose();
      model.term_embeddings.row(ex.tail).noalias() -=
          (lr * ex.coef) * ex.d_tail.transpose();
      model.relation_embeddings.row(ex.rel).noalias() -=
          (lr * ex.coef) * ex.d_rel.transpose();
      model.relation_bias[ex.rel] -= lr * ex.coef;
      const Eigen::MatrixXd outer = ex.e_head * ex.e_tail.transpose();
      for (int k = 0; k < kRelationEmbeddingDim; ++k) {
        const double scale = lr * ex.coef * ex.e_rel[k];
        model.interaction[static_cast<std::size_t>(k)].noalias() -= scale * outer;
      }
    }

    if (log != nullptr && (iter % window == 0 || iter == hp.iterations)) {
      log->window_losses.emplace_back(
          iter, window_loss / static_cast<double>(window_examples));
      window_loss = 0.0;
      window_examples = 0;
    }
  }
  return model;
}

Eigen::VectorXd sme_features(const SmeModel& model, const Triple& triple) {
  for (const auto rel : kFeatureRelations) {
    if (!model.relation_index.contains(std::string(rel))) {
      throw DataError("model schema lacks feature relation: " + std::string(rel));
    }
  }
  auto s = [&](std::string_view rel, const std::string& x, const std::string& y) {
    return score_triple(model, std::string(rel), x, y);
  };
  const std::string& t1 = triple.term1;
  const std::string& t2 = triple.term2;
  const std::string& a = triple.attribute;

  Eigen::VectorXd f(11);
  f[0] = (s("RelatedTo", t1, a) + s("RelatedTo", a, t1)) -
         (s("RelatedTo", t2, a) + s("RelatedTo", a, t2));
  for (int i = 1; i <= 8; ++i) {
    const auto rel = kFeatureRelations[static_cast<std::size_t>(i)];
    f[i] = s(rel, t1, a) - s(rel, t2, a);
  }
  f[9] = s("PartOf", a, t1) - s("PartOf", a, t2);
  f[10] = s("AtLocation", a, t1) - s("AtLocation", a, t2);
  return f;
}

namespace {

constexpr char kModelMagic[4] = {'S', 'M', 'E', 'M'};
constexpr unsigned char kModelVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw DataError("model file truncated while reading " + what);
  }
  return v;
}

double read_f64(std::istream& in, const std::string& what) {
  double v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw DataError("model file truncated while reading " + what);
  }
  return v;
}

std::string read_string(std::istream& in, const std::string& what) {
  const std::uint32_t len = read_u32(in, what + " length");
  std::string s(len, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(len))) {
    throw DataError("model file truncated while reading " + what);
  }
  return s;
}

}  // namespace

void save_sme_model(const SmeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file: " + path.string());

  out.write(kModelMagic, sizeof(kModelMagic));
  out.put(static_cast<char>(kModelVersion));
  write_u32(out, static_cast<std::uint32_t>(model.terms.size()));
  write_u32(out, static_cast<std::uint32_t>(model.relations.size()));
  write_u32(out, static_cast<std::uint32_t>(model.term_dim()));
  write_u32(out, kRelationEmbeddingDim);

  for (const auto& t : model.terms) write_string(out, t);
  for (const auto& r : model.relations) write_string(out, r);

  const Eigen::Index dt = model.term_dim();
  for (Eigen::Index i = 0; i < model.term_embeddings.rows(); ++i) {
    for (Eigen::Index j = 0; j < dt; ++j) write_f64(out, model.term_embeddings(i, j));
  }
  for (Eigen::Index i = 0; i < model.relation_embeddings.rows(); ++i) {
    for (Eigen::Index j = 0; j < kRelationEmbeddingDim; ++j) {
      write_f64(out, model.relation_embeddings(i, j));
    }
  }
  for (const auto& slice : model.interaction) {
    for (Eigen::Index i = 0; i < dt; ++i) {
      for (Eigen::Index j = 0; j < dt; ++j) write_f64(out, slice(i, j));
    }
  }
  for (Eigen::Index i = 0; i < model.relation_bias.size(); ++i) {
    write_f64(out, model.relation_bias[i]);
  }
  if (!out) throw DataError("failed writing model file: " + path.string());
}

SmeModel load_sme_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());

  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kModelMagic, 4) != 0) {
    throw DataError("not a model file (bad magic): " + path.string());
  }
  const int version = in.get();
  if (version != kModelVersion) {
    throw DataError("unsupported model version " + std::to_string(version) + ": " +
                    path.string());
  }

  const std::uint32_t t_count = read_u32(in, "term count");
  const std::uint32_t r_count = read_u32(in, "relation count");
  const std::uint32_t dt = read_u32(in, "term dim");
  const std::uint32_t rd = read_u32(in, "relation dim");
  if (rd != kRelationEmbeddingDim) {
    throw DataError("model relation dim " + std::to_string(rd) + " != " +
                    std::to_string(kRelationEmbeddingDim));
  }
  if (dt < 1) throw DataError("model term dim must be positive");

  SmeModel model;
  model.terms.reserve(t_count);
  for (std::uint32_t i = 0; i < t_count; ++i) {
    model.terms.push_back(read_string(in, "term"));
    model.term_index.emplace(model.terms.back(), static_cast<int>(i));
  }
  for (std::uint32_t i = 0; i < r_count; ++i) {
    model.relations.push_back(read_string(in, "relation"));
    model.relation_index.emplace(model.relations.back(), static_cast<int>(i));
  }

  model.term_embeddings.resize(t_count, dt);
  for (std::uint32_t i = 0; i < t_count; ++i) {
    for (std::uint32_t j = 0; j < dt; ++j) {
      model.term_embeddings(i, j) = read_f64(in, "term embedding");
    }
  }
  model.relation_embeddings.resize(r_count, kRelationEmbeddingDim);
  for (std::uint32_t i = 0; i < r_count; ++i) {
    for (int j = 0; j < kRelationEmbeddingDim; ++j) {
      model.relation_embeddings(i, j) = read_f64(in, "relation embedding");
    }
  }
  model.interaction.assign(kRelationEmbeddingDim, Eigen::MatrixXd(dt, dt));
  for (auto& slice : model.interaction) {
    for (std::uint32_t i = 0; i < dt; ++i) {
      for (std::uint32_t j = 0; j < dt; ++j) slice(i, j) = read_f64(in, "interaction");
    }
  }
  model.relation_bias.resize(r_count);
  for (std::uint32_t i = 0; i < r_count; ++i) {
    model.relation_bias[i] = read_f64(in, "relation bias");
  }
  return model;
}

}  // namespace dattr
