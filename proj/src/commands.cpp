#include "dattr/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "dattr/dataset.hpp"
#include "dattr/errors.hpp"
#include "dattr/rng.hpp"

namespace dattr {
namespace {

void require_file(const std::filesystem::path& p, const std::string& what) {
  if (p.empty()) throw ConfigError("config does not declare a " + what + " path");
  if (!std::filesystem::exists(p)) {
    throw DataError(what + " file does not exist: " + p.string());
  }
}

void ensure_output_dir(const RunConfig& config) {
  if (config.output_dir.empty()) throw ConfigError("output directory not set");
  std::filesystem::create_directories(config.output_dir);
}

std::string stamp(const RunConfig& config) {
  return "seed=" + std::to_string(config.seed) + " config=" + config_hash(config);
}

nlohmann::json report_json(const EvalReport& report, const RunConfig& config) {
  nlohmann::json doc;
  doc["f1_positive"] = report.f1_positive;
  doc["f1_negative"] = report.f1_negative;
  doc["f1_macro"] = report.f1_macro;
  doc["sem"] = report.sem;
  doc["n"] = report.n;
  doc["split"] = report.split;
  doc["bootstrap_samples"] = kDefaultBootstrapSamples;
  doc["seed"] = config.seed;
  doc["config_hash"] = config_hash(config);
  return doc;
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

ResourceBundle load_bundle(const RunConfig& config) {
  require_file(config.paths.embeddings, "embeddings");
  require_file(config.paths.lead_sections, "lead-sections");
  require_file(config.paths.lexicon, "lexicon");
  require_file(config.paths.unigram_counts, "unigram-counts");
  require_file(config.paths.bigram_counts, "bigram-counts");
  require_file(config.paths.sme_model, "sme-model");

  ResourceBundle bundle;
  bundle.embeddings = load_embeddings(config.paths.embeddings);
  bundle.leads = load_lead_sections(config.paths.lead_sections);
  bundle.lexicon = load_lexicon(config.paths.lexicon);
  bundle.ngrams = load_ngram_counts(config.paths.unigram_counts,
                                    config.paths.bigram_counts);
  bundle.sme = load_sme_model(config.paths.sme_model);
  return bundle;
}

RelationSchema schema_for(const RunConfig& config, const KnowledgeGraph& kg) {
  if (!config.paths.relation_schema.empty()) {
    require_file(config.paths.relation_schema, "relation-schema");
    return load_schema(config.paths.relation_schema);
  }
  std::vector<std::string> extras;
  for (const auto& e : kg.edges) {
    if (std::find(extras.begin(), extras.end(), e.relation) == extras.end()) {
      extras.push_back(e.relation);
    }
  }
  return default_schema(extras);
}

std::filesystem::path cmd_train_sme(const RunConfig& config) {
  require_file(config.paths.kg_edges, "edge");
  ensure_output_dir(config);

  const KnowledgeGraph kg = load_edges(config.paths.kg_edges);
  const RelationSchema schema = schema_for(config, kg);

  SmeHyperparams hp = config.sme;
  hp.seed = sub_seed(config.seed, kSmeSeedLabel);

  const EmbeddingStore* init_from = nullptr;
  EmbeddingStore store;
  if (config.sme_init_from_embeddings) {
    require_file(config.paths.embeddings, "embeddings");
    store = load_embeddings(config.paths.embeddings);
    init_from = &store;
  }

  SmeTrainLog log;
  const SmeModel model = train_sme(kg, schema, hp, init_from, &log);

  std::filesystem::create_directories(config.paths.sme_model.parent_path());
  save_sme_model(model, config.paths.sme_model);

  std::ofstream out(config.output_dir / "sme_training_log.tsv", std::ios::trunc);
  if (!out) throw DataError("cannot write sme training log");
  out << "# " << stamp(config) << "\n";
  out << "step\tmean_loss\n";
  out << std::setprecision(17);
  for (const auto& [step, loss] : log.window_losses) {
    out << step << '\t' << loss << "\n";
  }
  return config.paths.sme_model;
}

std::filesystem::path cmd_extract_features(const RunConfig& config,
                                           const std::filesystem::path& input_csv) {
  require_file(input_csv, "task");
  ensure_output_dir(config);

  const ResourceBundle bundle = load_bundle(config);
  const std::vector<Triple> triples = load_triples(input_csv);

  const bool labeled = !triples.empty() && triples.front().label.has_value();
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  if (labeled) {
    const LabeledMatrix m = build_matrix(triples, bundle);
    x = m.X;
    y = m.y;
  } else {
    x = build_feature_matrix(triples, bundle);
  }

  const auto out_path =
      config.output_dir / ("features-" + input_csv.stem().string() + ".csv");
  write_feature_csv(out_path, x, y, stamp(config));
  return out_path;
}

std::filesystem::path cmd_train(const RunConfig& config) {
  require_file(config.paths.train, "train-split");
  ensure_output_dir(config);

  const ResourceBundle bundle = load_bundle(config);
  const std::vector<Triple> triples = load_triples(config.paths.train);
  if (triples.empty()) throw DataError("train split is empty");
  const LabeledMatrix m = build_matrix(triples, bundle);

  const Eigen::VectorXd scales = fit_column_scales(m.X);
  SvmProblem problem;
  problem.X = m.X * scales.asDiagonal();
  problem.y = (2 * m.y.cast<double>().array() - 1.0).matrix();

  SvcOptions options = config.classifier;
  options.seed = sub_seed(config.seed, kSvcSeedLabel);
  const SvcSolution sol = train_svc(problem, options);
  if (!sol.converged) {
    std::cerr << "warning: svm did not converge within " << options.max_iterations
              << " passes (projected-gradient spread " << sol.gap << ")\n";
  }

  TrainedClassifier clf;
  clf.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
  clf.weights = clip_negative(sol.weights);
  clf.intercept = sol.intercept;
  clf.scales = scales;
  clf.C = options.C;
  clf.tolerance = options.tolerance;
  clf.max_iterations = options.max_iterations;

  const auto clf_path = config.output_dir / "classifier.json";
  save_classifier(clf, clf_path, config.seed, config_hash(config));

  std::vector<int> preds(triples.size());
  std::vector<int> gold(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    preds[i] = predict(clf, m.X.row(static_cast<Eigen::Index>(i)).transpose());
    gold[i] = m.y[static_cast<Eigen::Index>(i)];
  }
  EvalReport report = macro_f1(preds, gold);
  report.sem = bootstrap_sem(preds, gold, kDefaultBootstrapSamples,
                             sub_seed(config.seed, kBootstrapSeedLabel));
  report.split = config.paths.train.stem().string();

  nlohmann::json doc = report_json(report, config);
  doc["C"] = options.C;
  doc["tolerance"] = options.tolerance;
  doc["max_iterations"] = options.max_iterations;
  doc["solver_iterations"] = sol.iterations;
  doc["solver_converged"] = sol.converged;
  write_json(doc, config.output_dir / "train_report.json");
  return clf_path;
}

std::filesystem::path cmd_predict(const RunConfig& config,
                                  const std::filesystem::path& split_csv) {
  require_file(split_csv, "task");
  ensure_output_dir(config);

  const auto clf_path = config.output_dir / "classifier.json";
  require_file(clf_path, "classifier");
  const TrainedClassifier clf = load_classifier(clf_path);
  const ResourceBundle bundle = load_bundle(config);

  const std::vector<Triple> triples = load_triples(split_csv);
  if (triples.empty()) {
    std::cerr << "warning: prediction input has zero rows: " << split_csv << "\n";
  }

  std::vector<PredictionRecord> records;
  records.reserve(triples.size());
  for (const auto& t : triples) {
    const FeatureVector f = extract(t, bundle);
    PredictionRecord rec;
    rec.triple = t;
    rec.decision_score = decision_score(clf, f);
    rec.predicted = rec.decision_score > 0.0 ? 1 : 0;
    records.push_back(std::move(rec));
  }

  const auto out_path =
      config.output_dir / ("predictions-" + split_csv.stem().string() + ".csv");
  const std::string header = "input=" + split_csv.string() +
                             " rows=" + std::to_string(records.size()) + " " +
                             stamp(config);
  write_predictions_csv(out_path, records, header);

  // The output must cover exactly the input rows; recount from disk.
  const auto written = load_predictions_csv(out_path);
  if (written.size() != triples.size()) {
    throw NumericalError("prediction row count " + std::to_string(written.size()) +
                         " does not match input row count " +
                         std::to_string(triples.size()));
  }
  return out_path;
}

EvalReport cmd_evaluate(const RunConfig& config,
                        const std::filesystem::path& predictions_csv,
                        const std::filesystem::path& gold_csv) {
  require_file(predictions_csv, "predictions");
  require_file(gold_csv, "gold");
  ensure_output_dir(config);

  const std::vector<Triple> predicted = load_predictions_csv(predictions_csv);
  const std::vector<Triple> gold = load_triples(gold_csv);
  if (predicted.size() != gold.size()) {
    throw DataError("predictions have " + std::to_string(predicted.size()) +
                    " rows but gold has " + std::to_string(gold.size()));
  }

  std::vector<int> pred_labels(predicted.size());
  std::vector<int> gold_labels(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i].term1 != gold[i].term1 || predicted[i].term2 != gold[i].term2 ||
        predicted[i].attribute != gold[i].attribute) {
      throw DataError("row " + std::to_string(i + 1) + ": predictions key (" +
                      predicted[i].term1 + ", " + predicted[i].term2 + ", " +
                      predicted[i].attribute + ") does not match gold key (" +
                      gold[i].term1 + ", " + gold[i].term2 + ", " +
                      gold[i].attribute + ")");
    }
    if (!gold[i].label.has_value()) {
      throw DataError("gold row " + std::to_string(i + 1) + " lacks a label");
    }
    pred_labels[i] = *predicted[i].label;
    gold_labels[i] = *gold[i].label;
  }

  EvalReport report = macro_f1(pred_labels, gold_labels);
  report.sem = bootstrap_sem(pred_labels, gold_labels, kDefaultBootstrapSamples,
                             sub_seed(config.seed, kBootstrapSeedLabel));
  report.split = gold_csv.stem().string();

  write_json(report_json(report, config),
             config.output_dir / ("report-" + gold_csv.stem().string() + ".json"));
  return report;
}

std::filesystem::path cmd_ablate(const RunConfig& config) {
  require_file(config.paths.train, "train-split");
  require_file(config.paths.validation, "validation-split");
  require_file(config.paths.test, "test-split");
  ensure_output_dir(config);

  const ResourceBundle bundle = load_bundle(config);
  const std::vector<Triple> train = load_triples(config.paths.train);
  const std::vector<Triple> validation = load_triples(config.paths.validation);
  const std::vector<Triple> test = load_triples(config.paths.test);

  SvcOptions options = config.classifier;
  options.seed = sub_seed(config.seed, kSvcSeedLabel);
  const auto rows = ablate(AblationInputs{train, validation, test}, bundle, options,
                           sub_seed(config.seed, kBootstrapSeedLabel));

  auto cell = [](const std::optional<double>& v) {
    return v.has_value() ? format_double(*v) : std::string();
  };

  const auto csv_path = config.output_dir / "ablation.csv";
  {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + csv_path.string());
    out << "# " << stamp(config) << "\n";
    out << "subset,validation_f1,validation_sem,test_f1,test_sem\n";
    for (const auto& row : rows) {
      out << row.subset << ',' << cell(row.validation_f1) << ','
          << cell(row.validation_sem) << ',' << cell(row.test_f1) << ','
          << cell(row.test_sem) << "\n";
      if (!row.error.empty()) {
        std::cerr << "warning: subset " << row.subset << " failed: " << row.error
                  << "\n";
      }
    }
  }

  // Companion points file for external plotting.
  const auto points_path = config.output_dir / "ablation_points.dat";
  {
    std::ofstream out(points_path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + points_path.string());
    out << "# " << stamp(config) << "\n";
    out << "# subset validation_f1 validation_sem test_f1 test_sem\n";
    for (const auto& row : rows) {
      if (!row.validation_f1.has_value() || !row.test_f1.has_value()) continue;
      out << row.subset << ' ' << format_double(*row.validation_f1) << ' '
          << format_double(*row.validation_sem) << ' ' << format_double(*row.test_f1)
          << ' ' << format_double(*row.test_sem) << "\n";
    }
  }
  return csv_path;
}

}  // namespace dattr
