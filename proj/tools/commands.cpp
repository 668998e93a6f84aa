#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "mlt/classify.hpp"
#include "mlt/eval.hpp"

namespace mlt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const std::string& path, const std::string& field) {
  if (path.empty()) throw InputError("missing required config field: " + field);
  if (!fs::exists(path))
    throw InputError("file not found (config field " + field + "): " + path);
}

void write_json_file(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report file: " + path.string());
  out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
  return j;
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string infer_lang(const std::vector<RawDocument>& docs,
                       const std::string& path) {
  for (const auto& d : docs)
    if (!d.lang.empty()) return d.lang;
  throw InputError(path + ": no document carries a \"lang\" field; set lang1/lang2");
}

struct Experiment {
  ModelKind kind = ModelKind::lda;
  Vocabulary vocab1, vocab2;
  LoadReport report1, report2;
  PairedCorpus corpus;
  std::size_t pairs_loaded = 0;
  Lexicon lexicon;
  std::size_t lexicon_in_vocab = 0;
  Hyperparameters hyper;
  TransferPlan plan;
};

Hyperparameters hyper_of(const ExperimentConfig& cfg) {
  Hyperparameters h;
  h.topics = cfg.topics;
  h.alpha = cfg.alpha;
  h.beta = cfg.beta;
  h.beta_prime = cfg.beta_prime;
  h.beta_dprime = cfg.beta_dprime;
  h.chi = cfg.chi;
  h.focus_threshold = cfg.focus_threshold;
  h.train_sweeps = cfg.train_sweeps;
  h.infer_sweeps = cfg.infer_sweeps;
  h.chains = cfg.chains;
  h.seed = cfg.seed;
  return h;
}

// plan=false loads corpora/pairs only (align's doc-frequency report needs
// documents and vocabularies, not a transfer plan).
Experiment load_experiment(const ExperimentConfig& cfg, bool plan = true);

Experiment load_experiment(const ExperimentConfig& cfg, bool plan) {
  Experiment ex;
  ex.kind = model_kind_from_string(cfg.model);
  require_file(cfg.side1, "side1");
  require_file(cfg.side2, "side2");
  if (!cfg.stoplist1.empty()) require_file(cfg.stoplist1, "stoplist1");
  if (!cfg.stoplist2.empty()) require_file(cfg.stoplist2, "stoplist2");

  auto raw1 = read_jsonl(cfg.side1);
  auto raw2 = read_jsonl(cfg.side2);
  const std::string lang1 =
      cfg.lang1.empty() ? infer_lang(raw1, cfg.side1) : cfg.lang1;
  const std::string lang2 =
      cfg.lang2.empty() ? infer_lang(raw2, cfg.side2) : cfg.lang2;
  std::vector<std::string> stop1, stop2;
  auto read_stop = [](const std::string& path) {
    std::vector<std::string> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) out.push_back(line);
    }
    return out;
  };
  if (!cfg.stoplist1.empty()) stop1 = read_stop(cfg.stoplist1);
  if (!cfg.stoplist2.empty()) stop2 = read_stop(cfg.stoplist2);

  CorpusSide s1 = index_documents(std::move(raw1), lang1, stop1,
                                  cfg.freq_cutoff, cfg.side1);
  CorpusSide s2 = index_documents(std::move(raw2), lang2, stop2,
                                  cfg.freq_cutoff, cfg.side2);
  ex.vocab1 = std::move(s1.vocab);
  ex.vocab2 = std::move(s2.vocab);
  ex.report1 = std::move(s1.report);
  ex.report2 = std::move(s2.report);

  ex.corpus = pair_documents(std::move(s1.docs), std::move(s2.docs));
  ex.pairs_loaded = ex.corpus.pairs.size();
  ex.corpus = subsample_links(std::move(ex.corpus), cfg.link_proportion,
                              derive_seed(cfg.seed, 101));

  const bool needs_lexicon =
      plan && (ex.kind == ModelKind::softlink || ex.kind == ModelKind::voclink);
  if (!cfg.lexicon.empty()) {
    require_file(cfg.lexicon, "lexicon");
    Lexicon lex = load_lexicon(cfg.lexicon, ex.vocab1, ex.vocab2);
    ex.lexicon_in_vocab = lex.entries.size();
    if (lex.entries.empty())
      std::fprintf(stderr, "warning: lexicon %s has no in-vocabulary entries\n",
                   cfg.lexicon.c_str());
    ex.lexicon = subsample_lexicon(
        lex, cfg.lexicon_proportion,
        cfg.lexicon_mode == "frequency" ? LexiconSampling::frequency
                                        : LexiconSampling::random,
        ex.vocab1, ex.vocab2, derive_seed(cfg.seed, 102));
  } else if (needs_lexicon) {
    throw InputError("missing required config field: lexicon (model " +
                     cfg.model + ")");
  }

  ex.hyper = hyper_of(cfg);
  if (plan)
    ex.plan = build_plan(ex.kind, ex.corpus, ex.lexicon, ex.vocab1, ex.vocab2,
                         ex.hyper);
  return ex;
}

json corpus_summary(const Experiment& ex) {
  auto side = [](const LoadReport& r, const Vocabulary& v) {
    return json{{"path", r.path},
                {"docs", r.docs},
                {"empty_docs", r.empty_doc_ids.size()},
                {"raw_types", r.raw_types},
                {"kept_types", r.kept_types},
                {"stoplist_removed", r.stoplist_removed},
                {"frequency_cut_removed", r.frequency_cut_removed},
                {"raw_tokens", r.raw_tokens},
                {"kept_tokens", r.kept_tokens},
                {"lang", v.lang},
                {"vocab_hash", hex64(v.hash())}};
  };
  return json{{"side1", side(ex.report1, ex.vocab1)},
              {"side2", side(ex.report2, ex.vocab2)},
              {"pairs_loaded", ex.pairs_loaded},
              {"pairs_used", ex.corpus.pairs.size()},
              {"lexicon_in_vocab", ex.lexicon_in_vocab},
              {"lexicon_used", ex.lexicon.entries.size()},
              {"lexicon_raw", ex.lexicon.raw_entries}};
}

json checkpoint_json(const Experiment& ex, const ChainResult& chain) {
  json j;
  j["schema"] = 1;
  j["kind"] = to_string(ex.kind);
  j["seed"] = chain.seed;
  j["corpus_fingerprint"] =
      hex64(corpus_fingerprint(ex.corpus, ex.vocab1, ex.vocab2));
  j["z1"] = chain.final_assignments.topics[0];
  j["z2"] = chain.final_assignments.topics[1];
  if (ex.kind == ModelKind::voclink) {
    j["paths1"] = chain.final_assignments.paths[0];
    j["paths2"] = chain.final_assignments.paths[1];
  }
  return j;
}

struct SideInference {
  std::vector<RawDocument> docs;
  InferResult result;
};

SideInference infer_side(const TrainedModel& model, const std::string& path,
                         std::uint64_t seed) {
  SideInference si;
  si.docs = read_jsonl(path);
  if (si.docs.empty()) throw InputError(path + ": empty test set");
  const std::string lang = infer_lang(si.docs, path);
  int side;
  if (lang == model.langs[0]) side = 0;
  else if (lang == model.langs[1]) side = 1;
  else
    throw InputError(path + ": lang \"" + lang +
                     "\" matches neither model language (" + model.langs[0] +
                     ", " + model.langs[1] + ")");
  si.result = infer(model, side, si.docs, seed);
  return si;
}

}  // namespace

void cmd_train(const ExperimentConfig& cfg) {
  Experiment ex = load_experiment(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  auto chains = train(ex.kind, ex.corpus, ex.vocab1, ex.vocab2, ex.plan,
                      ex.hyper, cfg.jobs, cfg.progress);
  fs::create_directories(cfg.out);
  json chain_rows = json::array();
  json timing_rows = json::array();
  for (std::size_t c = 0; c < chains.size(); c++) {
    const fs::path model_path =
        fs::path(cfg.out) / ("model_chain" + std::to_string(c) + ".json");
    chains[c].model.save(model_path.string());
    write_json_file(
        fs::path(cfg.out) / ("state_chain" + std::to_string(c) + ".json"),
        checkpoint_json(ex, chains[c]));
    chain_rows.push_back({{"chain", c},
                          {"seed", chains[c].seed},
                          {"count_checksum", hex64(chains[c].count_checksum)},
                          {"model_file", model_path.filename().string()}});
    timing_rows.push_back({{"chain", c}, {"elapsed_ms", chains[c].elapsed_ms}});
  }
  json report;
  report["schema"] = 1;
  report["command"] = "train";
  report["config"] = cfg.to_json();
  report["corpus"] = corpus_summary(ex);
  report["transfer_fingerprint"] = hex64(chains[0].model.transfer_fingerprint);
  report["chains"] = chain_rows;
  write_json_file(fs::path(cfg.out) / "train_report.json", report);
  // wall-clock lives apart so reports stay byte-identical across runs
  const double total_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  write_json_file(fs::path(cfg.out) / "timing.json",
                  json{{"schema", 1},
                       {"command", "train"},
                       {"chains", timing_rows},
                       {"total_ms", total_ms}});
}

void cmd_infer(const ExperimentConfig& cfg, const std::string& model_path,
               const std::string& input_path) {
  require_file(model_path, "model");
  require_file(input_path, "input");
  TrainedModel model = TrainedModel::load(model_path);
  SideInference si = infer_side(model, input_path, derive_seed(cfg.seed, 301));
  fs::create_directories(cfg.out);

  FeatureSet all;
  all.label_universe = cfg.labels;
  std::ofstream tsv(fs::path(cfg.out) / "theta.tsv");
  tsv << "id";
  for (int k = 0; k < model.topics(); k++) tsv << "\tt" << k;
  tsv << "\tlabels\n";
  for (std::size_t d = 0; d < si.docs.size(); d++) {
    tsv << si.docs[d].id;
    for (double v : si.result.theta[d]) tsv << "\t" << format_g9(v);
    tsv << "\t";
    for (std::size_t i = 0; i < si.docs[d].labels.size(); i++) {
      if (i) tsv << ";";
      tsv << si.docs[d].labels[i];
    }
    tsv << "\n";
  }
  write_json_file(fs::path(cfg.out) / "infer_report.json",
                  json{{"schema", 1},
                       {"command", "infer"},
                       {"model_file", model_path},
                       {"input", input_path},
                       {"documents", si.docs.size()},
                       {"total_tokens", si.result.report.total_tokens},
                       {"oov_tokens", si.result.report.oov_tokens},
                       {"all_oov_docs", si.result.report.all_oov_docs},
                       {"empty_docs", si.result.report.empty_docs}});
}

void cmd_eval(const ExperimentConfig& cfg,
              const std::vector<std::string>& model_paths) {
  if (model_paths.empty()) throw InputError("eval: no model files given");
  require_file(cfg.reference, "reference");
  std::vector<TrainedModel> models;
  for (const auto& p : model_paths) {
    require_file(p, "model");
    models.push_back(TrainedModel::load(p));
  }
  for (const auto& m : models) {
    if (m.topics() != models[0].topics())
      throw InputError("eval: models disagree on topic count");
    if (m.vocab_hash != models[0].vocab_hash)
      throw InputError("eval: models trained on different vocabularies");
  }
  auto ref_docs = read_jsonl(cfg.reference);
  ReferenceCorpus ref = ReferenceCorpus::from_documents(
      ref_docs, models[0].langs[0], models[0].langs[1]);

  json chains = json::array();
  std::vector<double> chain_means;
  for (std::size_t c = 0; c < models.size(); c++) {
    json per_topic = json::array();
    double sum = 0.0;
    std::size_t covered = 0, total = 0;
    for (int k = 0; k < models[c].topics(); k++) {
      auto topic = top_words(models[c], k, cfg.top_words);
      auto res = cnpmi(topic, ref);
      per_topic.push_back(res.value);
      sum += res.value;
      covered += res.covered_words;
      total += res.total_words;
    }
    const double mean = sum / models[c].topics();
    chain_means.push_back(mean);
    chains.push_back({{"model_file", model_paths[c]},
                      {"per_topic", per_topic},
                      {"mean", mean},
                      {"coverage", total == 0 ? 0.0
                                              : static_cast<double>(covered) /
                                                    static_cast<double>(total)}});
  }
  double mean = 0.0;
  for (double m : chain_means) mean += m;
  mean /= static_cast<double>(chain_means.size());
  double stdev = 0.0;
  if (chain_means.size() > 1) {
    for (double m : chain_means) stdev += (m - mean) * (m - mean);
    stdev = std::sqrt(stdev / static_cast<double>(chain_means.size() - 1));
  }
  fs::create_directories(cfg.out);
  write_json_file(fs::path(cfg.out) / "eval_report.json",
                  json{{"schema", 1},
                       {"command", "eval"},
                       {"C", cfg.top_words},
                       {"reference_pairs", ref.size},
                       {"chains", chains},
                       {"mean", mean},
                       {"stdev", stdev}});
}

void cmd_classify(const ExperimentConfig& cfg, const std::string& model_path) {
  require_file(model_path, "model");
  require_file(cfg.test_side1, "test-side1");
  require_file(cfg.test_side2, "test-side2");
  TrainedModel model = TrainedModel::load(model_path);
  SideInference train_side =
      infer_side(model, cfg.test_side1, derive_seed(cfg.seed, 311));
  SideInference test_side =
      infer_side(model, cfg.test_side2, derive_seed(cfg.seed, 312));

  FeatureSet train_features =
      export_features(train_side.result.theta, train_side.docs,
                      train_side.result.token_counts, cfg.labels);
  FeatureSet test_features =
      export_features(test_side.result.theta, test_side.docs,
                      test_side.result.token_counts, cfg.labels);

  LinearClassifier clf =
      train_classifier(train_features, cfg.folds, cfg.reg_grid,
                       derive_seed(cfg.seed, 313));
  auto predicted = predict(clf, test_features.rows);
  auto metrics =
      classification_metrics(predicted, test_features.labels, cfg.labels);

  fs::create_directories(cfg.out);
  write_features_tsv((fs::path(cfg.out) / "train_features.tsv").string(),
                     train_features);
  write_features_tsv((fs::path(cfg.out) / "test_features.tsv").string(),
                     test_features);
  json per_label = json::array();
  for (const auto& lm : metrics.per_label)
    per_label.push_back({{"label", lm.label},
                         {"tp", lm.tp},
                         {"fp", lm.fp},
                         {"fn", lm.fn},
                         {"precision", lm.precision},
                         {"recall", lm.recall},
                         {"f1", lm.f1}});
  write_json_file(
      fs::path(cfg.out) / "classify_report.json",
      json{{"schema", 1},
           {"command", "classify"},
           {"model_file", model_path},
           {"labels", cfg.labels},
           {"train_rows", train_features.rows.size()},
           {"test_rows", test_features.rows.size()},
           {"chosen_inverse_reg", clf.chosen_inverse_reg},
           {"degenerate_labels", clf.degenerate_labels},
           {"micro_f1", metrics.micro_f1},
           {"micro_precision", metrics.micro_precision},
           {"micro_recall", metrics.micro_recall},
           {"per_label", per_label}});
}

void cmd_align(const ExperimentConfig& cfg, const std::string& model_a,
               const std::string& model_b, bool with_doc_frequency) {
  require_file(model_a, "model-a");
  require_file(model_b, "model-b");
  TrainedModel a = TrainedModel::load(model_a);
  TrainedModel b = TrainedModel::load(model_b);
  auto pairs = align_topics(a, b, cfg.top_words, cfg.validity_fraction);
  json jpairs = json::array();
  for (const auto& p : pairs)
    jpairs.push_back({{"a", p.topic_a}, {"b", p.topic_b}, {"score", p.score}});

  json report{{"schema", 1},
              {"command", "align"},
              {"model_a", model_a},
              {"model_b", model_b},
              {"C", cfg.top_words},
              {"validity_fraction", cfg.validity_fraction},
              {"pairs", jpairs}};

  if (with_doc_frequency) {
    Experiment ex = load_experiment(cfg, /*plan=*/false);
    if (ex.vocab1.hash() != a.vocab_hash[0] || ex.vocab2.hash() != a.vocab_hash[1])
      throw InputError("align: training corpus does not match the models");
    json rows = json::array();
    for (const auto& p : pairs) {
      auto wa = top_words(a, p.topic_a, cfg.top_words);
      auto wb = top_words(b, p.topic_b, cfg.top_words);
      auto rep = doc_frequency_report(wa, wb, ex.corpus, ex.vocab1, ex.vocab2);
      json row{{"a", p.topic_a},
               {"b", p.topic_b},
               {"shared_count", rep.shared_count},
               {"only_first_count", rep.only_first_count},
               {"only_second_count", rep.only_second_count}};
      row["shared_mean"] = rep.shared ? json(*rep.shared) : json();
      row["only_first_mean"] = rep.only_first ? json(*rep.only_first) : json();
      row["only_second_mean"] =
          rep.only_second ? json(*rep.only_second) : json();
      rows.push_back(row);
    }
    report["doc_frequency"] = rows;
  }
  fs::create_directories(cfg.out);
  write_json_file(fs::path(cfg.out) / "align_report.json", report);
}

void cmd_strength(const ExperimentConfig& cfg, const std::string& state_path) {
  require_file(state_path, "state");
  Experiment ex = load_experiment(cfg);
  json j = read_json_file(state_path);
  if (model_kind_from_string(j.at("kind").get<std::string>()) != ex.kind)
    throw InputError("strength: state checkpoint kind differs from config model");
  const std::string fp = j.at("corpus_fingerprint").get<std::string>();
  if (fp != hex64(corpus_fingerprint(ex.corpus, ex.vocab1, ex.vocab2)))
    throw InputError("strength: corpus fingerprint mismatch (different data or "
                     "preprocessing)");
  Assignments restore;
  restore.topics[0] = j.at("z1").get<std::vector<std::int32_t>>();
  restore.topics[1] = j.at("z2").get<std::vector<std::int32_t>>();
  if (ex.kind == ModelKind::voclink) {
    restore.paths[0] = j.at("paths1").get<std::vector<std::int32_t>>();
    restore.paths[1] = j.at("paths2").get<std::vector<std::int32_t>>();
  }
  SamplerState state(ex.kind, ex.corpus, ex.vocab1, ex.vocab2, ex.plan,
                     ex.hyper, j.at("seed").get<std::uint64_t>(), restore);
  auto rep = transfer_strength(state);
  fs::create_directories(cfg.out);
  write_json_file(fs::path(cfg.out) / "strength_report.json",
                  json{{"schema", 1},
                       {"command", "strength"},
                       {"kind", to_string(ex.kind)},
                       {"state_file", state_path},
                       {"tokens", rep.tokens},
                       {"mean", rep.mean},
                       {"deciles", rep.deciles}});
}

bool cmd_sweep(const ExperimentConfig& cfg) {
  std::vector<std::string> models =
      cfg.sweep_models.empty() ? std::vector<std::string>{cfg.model}
                               : cfg.sweep_models;
  struct Cell {
    std::size_t index;
    std::string model;
    double value;
    ExperimentConfig config;
    std::string status = "pending";
    std::string error;
    std::vector<double> chain_cnpmi;  // NaN when no reference
    std::vector<double> chain_f1;     // NaN when no test sets
  };
  std::vector<Cell> cells;
  for (std::size_t mi = 0; mi < models.size(); mi++)
    for (std::size_t vi = 0; vi < cfg.sweep_values.size(); vi++) {
      Cell cell;
      cell.index = mi * cfg.sweep_values.size() + vi;
      cell.model = models[mi];
      cell.value = cfg.sweep_values[vi];
      cell.config = cfg;
      cell.config.model = cell.model;
      cell.config.jobs = 1;
      cell.config.progress = false;
      if (cfg.sweep_axis == "link-proportion")
        cell.config.link_proportion = cell.value;
      else
        cell.config.lexicon_proportion = cell.value;
      // cell seeds depend only on (base seed, cell index)
      cell.config.seed = derive_seed(cfg.seed, 1000 + cell.index);
      char dir[64];
      std::snprintf(dir, sizeof(dir), "cell_%03zu_%s", cell.index,
                    cell.model.c_str());
      cell.config.out = (fs::path(cfg.out) / dir).string();
      cells.push_back(std::move(cell));
    }

  const bool with_eval = !cfg.reference.empty();
  const bool with_classify =
      !cfg.test_side1.empty() && !cfg.test_side2.empty();

  auto run_cell = [&](Cell& cell) {
    try {
      cmd_train(cell.config);
      std::vector<std::string> model_files;
      for (int c = 0; c < cell.config.chains; c++)
        model_files.push_back(
            (fs::path(cell.config.out) / ("model_chain" + std::to_string(c) + ".json"))
                .string());
      if (with_eval) {
        cmd_eval(cell.config, model_files);
        json j = read_json_file(
            (fs::path(cell.config.out) / "eval_report.json").string());
        for (const auto& ch : j.at("chains"))
          cell.chain_cnpmi.push_back(ch.at("mean").get<double>());
      } else {
        cell.chain_cnpmi.assign(cell.config.chains, std::nan(""));
      }
      if (with_classify) {
        for (int c = 0; c < cell.config.chains; c++) {
          ExperimentConfig ccfg = cell.config;
          ccfg.out =
              (fs::path(cell.config.out) / ("classify_chain" + std::to_string(c)))
                  .string();
          cmd_classify(ccfg, model_files[c]);
          json j = read_json_file(
              (fs::path(ccfg.out) / "classify_report.json").string());
          cell.chain_f1.push_back(j.at("micro_f1").get<double>());
        }
      } else {
        cell.chain_f1.assign(cell.config.chains, std::nan(""));
      }
      cell.status = "ok";
    } catch (const std::exception& e) {
      cell.status = "failed";
      cell.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      run_cell(cells[i]);
    }
  };
  const int workers =
      std::max(1, std::min<int>(cfg.jobs, static_cast<int>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; i++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  fs::create_directories(cfg.out);
  std::ofstream tsv(fs::path(cfg.out) / "sweep_summary.tsv");
  tsv << "axis-value\tmodel\tchain\tcnpmi-mean\tf1\n";
  for (const auto& cell : cells) {
    if (cell.status != "ok") continue;
    for (int c = 0; c < cell.config.chains; c++) {
      tsv << format_g9(cell.value) << "\t" << cell.model << "\t" << c << "\t";
      tsv << (std::isnan(cell.chain_cnpmi[c]) ? "NA"
                                              : format_g9(cell.chain_cnpmi[c]));
      tsv << "\t";
      tsv << (std::isnan(cell.chain_f1[c]) ? "NA" : format_g9(cell.chain_f1[c]));
      tsv << "\n";
    }
  }
  tsv.close();

  json jcells = json::array();
  json failures = json::array();
  for (const auto& cell : cells) {
    jcells.push_back({{"index", cell.index},
                      {"model", cell.model},
                      {"value", cell.value},
                      {"out", cell.config.out},
                      {"seed", cell.config.seed},
                      {"status", cell.status}});
    if (cell.status != "ok")
      failures.push_back({{"index", cell.index}, {"error", cell.error}});
  }
  write_json_file(fs::path(cfg.out) / "sweep_report.json",
                  json{{"schema", 1},
                       {"command", "sweep"},
                       {"axis", cfg.sweep_axis},
                       {"values", cfg.sweep_values},
                       {"models", models},
                       {"cells", jcells},
                       {"failures", failures}});
  return failures.empty();
}

}  // namespace mlt::cli
