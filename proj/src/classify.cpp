#include "mlt/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "mlt/rng.hpp"

namespace mlt {

FeatureSet export_features(const std::vector<std::vector<double>>& theta,
                           const std::vector<RawDocument>& docs,
                           const std::vector<std::int64_t>& token_counts,
                           const std::vector<std::string>& label_universe) {
  if (theta.size() != docs.size() || token_counts.size() != docs.size())
    throw InputError("export_features: theta rows do not align with documents");
  std::unordered_map<std::string, std::int32_t> label_id;
  for (std::size_t i = 0; i < label_universe.size(); i++)
    label_id.emplace(label_universe[i], static_cast<std::int32_t>(i));

  FeatureSet out;
  out.label_universe = label_universe;
  for (std::size_t d = 0; d < docs.size(); d++) {
    if (token_counts[d] == 0) continue;
    std::vector<std::int32_t> labels;
    for (const auto& l : docs[d].labels) {
      auto it = label_id.find(l);
      if (it != label_id.end()) labels.push_back(it->second);
    }
    if (labels.empty()) continue;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    out.ids.push_back(docs[d].id);
    out.rows.push_back(theta[d]);
    out.labels.push_back(std::move(labels));
  }
  if (out.rows.empty())
    throw InputError("export_features: no labeled documents in the universe");
  return out;
}

void write_features_tsv(const std::string& path, const FeatureSet& features) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write features file: " + path);
  const std::size_t k = features.rows.empty() ? 0 : features.rows[0].size();
  out << "id";
  for (std::size_t i = 0; i < k; i++) out << "\tt" << i;
  out << "\tlabels\n";
  char buf[64];
  for (std::size_t r = 0; r < features.rows.size(); r++) {
    out << features.ids[r];
    for (double v : features.rows[r]) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out << "\t" << buf;
    }
    out << "\t";
    for (std::size_t i = 0; i < features.labels[r].size(); i++) {
      if (i) out << ";";
      out << features.label_universe[features.labels[r][i]];
    }
    out << "\n";
  }
}

namespace {

struct Binary {
  std::vector<double> w;
  double b = 0.0;
};

// Deterministic full-batch subgradient descent on
// lambda/2 ||w||^2 + (1/n) sum hinge; the averaged gradient makes training
// invariant to duplicating the data.
Binary train_binary(const std::vector<std::vector<double>>& x,
                    const std::vector<double>& y, double lambda, int epochs) {
  const std::size_t n = x.size();
  const std::size_t dim = x.empty() ? 0 : x[0].size();
  Binary m;
  m.w.assign(dim, 0.0);
  std::vector<double> gw(dim);
  for (int t = 1; t <= epochs; t++) {
    for (std::size_t j = 0; j < dim; j++) gw[j] = lambda * m.w[j];
    double gb = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; i++) {
      double margin = m.b;
      for (std::size_t j = 0; j < dim; j++) margin += m.w[j] * x[i][j];
      if (y[i] * margin < 1.0) {
        for (std::size_t j = 0; j < dim; j++) gw[j] -= y[i] * x[i][j] * inv_n;
        gb -= y[i] * inv_n;
      }
    }
    const double eta = 1.0 / (lambda * t);
    for (std::size_t j = 0; j < dim; j++) m.w[j] -= eta * gw[j];
    m.b -= eta * gb;
  }
  return m;
}

std::vector<std::vector<std::int32_t>> predict_rows(
    const std::vector<Binary>& scorers,
    const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<std::int32_t>> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); r++)
    for (std::size_t l = 0; l < scorers.size(); l++) {
      double margin = scorers[l].b;
      for (std::size_t j = 0; j < rows[r].size(); j++)
        margin += scorers[l].w[j] * rows[r][j];
      if (margin > 0.0) out[r].push_back(static_cast<std::int32_t>(l));
    }
  return out;
}

std::vector<Binary> fit_all(const FeatureSet& data,
                            const std::vector<std::size_t>& rows, double lambda,
                            int epochs, std::vector<std::string>* degenerate) {
  const std::size_t nl = data.label_universe.size();
  std::vector<Binary> scorers(nl);
  std::vector<std::vector<double>> x;
  x.reserve(rows.size());
  for (std::size_t r : rows) x.push_back(data.rows[r]);
  std::vector<double> y(rows.size());
  for (std::size_t l = 0; l < nl; l++) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < rows.size(); i++) {
      const auto& labels = data.labels[rows[i]];
      const bool pos = std::find(labels.begin(), labels.end(),
                                 static_cast<std::int32_t>(l)) != labels.end();
      y[i] = pos ? 1.0 : -1.0;
      if (pos) positives++;
    }
    if (positives == 0) {
      scorers[l].w.assign(data.rows.empty() ? 0 : data.rows[0].size(), 0.0);
      scorers[l].b = -1.0;  // never predicted
      if (degenerate) degenerate->push_back(data.label_universe[l]);
      continue;
    }
    scorers[l] = train_binary(x, y, lambda, epochs);
  }
  return scorers;
}

}  // namespace

LinearClassifier train_classifier(const FeatureSet& train, int folds,
                                  const std::vector<double>& inverse_reg_grid,
                                  std::uint64_t seed, int epochs) {
  if (train.rows.empty()) throw InputError("train_classifier: empty training set");
  if (folds < 2) throw InputError("train_classifier: folds must be >= 2");
  if (inverse_reg_grid.empty())
    throw InputError("train_classifier: empty regularization grid");

  // Stratify by each row's most frequent gold label so folds keep positives.
  std::vector<std::int64_t> label_freq(train.label_universe.size(), 0);
  for (const auto& labels : train.labels)
    for (std::int32_t l : labels) label_freq[l]++;
  auto strat_key = [&](std::size_t r) {
    std::int32_t best = train.labels[r][0];
    for (std::int32_t l : train.labels[r])
      if (label_freq[l] > label_freq[best] ||
          (label_freq[l] == label_freq[best] && l < best))
        best = l;
    return best;
  };
  std::vector<std::vector<std::size_t>> groups(train.label_universe.size());
  for (std::size_t r = 0; r < train.rows.size(); r++)
    groups[strat_key(r)].push_back(r);
  Rng rng(seed);
  std::vector<int> fold_of(train.rows.size(), 0);
  for (auto& g : groups) {
    rng.shuffle(g);
    for (std::size_t i = 0; i < g.size(); i++)
      fold_of[g[i]] = static_cast<int>(i % folds);
  }

  double best_score = -1.0;
  double best_g = inverse_reg_grid[0];
  for (double g : inverse_reg_grid) {
    const double lambda = 1.0 / g;
    // pooled predictions over held-out folds
    std::vector<std::vector<std::int32_t>> pred(train.rows.size());
    std::vector<std::vector<std::int32_t>> gold(train.rows.size());
    for (int f = 0; f < folds; f++) {
      std::vector<std::size_t> fit_rows, held;
      for (std::size_t r = 0; r < train.rows.size(); r++)
        (fold_of[r] == f ? held : fit_rows).push_back(r);
      if (fit_rows.empty() || held.empty()) continue;
      auto scorers = fit_all(train, fit_rows, lambda, epochs, nullptr);
      std::vector<std::vector<double>> hx;
      for (std::size_t r : held) hx.push_back(train.rows[r]);
      auto hp = predict_rows(scorers, hx);
      for (std::size_t i = 0; i < held.size(); i++) {
        pred[held[i]] = hp[i];
        gold[held[i]] = train.labels[held[i]];
      }
    }
    const double score = micro_f1(pred, gold);
    if (score > best_score) {
      best_score = score;
      best_g = g;
    }
  }

  LinearClassifier clf;
  clf.label_universe = train.label_universe;
  clf.chosen_inverse_reg = best_g;
  clf.epochs = epochs;
  clf.seed = seed;
  std::vector<std::size_t> all(train.rows.size());
  for (std::size_t r = 0; r < all.size(); r++) all[r] = r;
  auto scorers = fit_all(train, all, 1.0 / best_g, epochs, &clf.degenerate_labels);
  for (auto& s : scorers) {
    clf.weights.push_back(std::move(s.w));
    clf.bias.push_back(s.b);
  }
  return clf;
}

std::vector<std::vector<std::int32_t>> predict(
    const LinearClassifier& clf, const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<std::int32_t>> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); r++) {
    if (!clf.weights.empty() && rows[r].size() != clf.weights[0].size())
      throw InputError("predict: feature dimension mismatch");
    for (std::size_t l = 0; l < clf.weights.size(); l++) {
      double margin = clf.bias[l];
      for (std::size_t j = 0; j < rows[r].size(); j++)
        margin += clf.weights[l][j] * rows[r][j];
      if (margin > 0.0) out[r].push_back(static_cast<std::int32_t>(l));
    }
  }
  return out;
}

double micro_f1(const std::vector<std::vector<std::int32_t>>& predicted,
                const std::vector<std::vector<std::int32_t>>& gold) {
  if (predicted.size() != gold.size())
    throw InputError("micro_f1: row count mismatch");
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t r = 0; r < predicted.size(); r++) {
    for (std::int32_t l : predicted[r]) {
      if (std::find(gold[r].begin(), gold[r].end(), l) != gold[r].end())
        tp++;
      else
        fp++;
    }
    for (std::int32_t l : gold[r])
      if (std::find(predicted[r].begin(), predicted[r].end(), l) ==
          predicted[r].end())
        fn++;
  }
  const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  const double rc = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  return p + rc == 0.0 ? 0.0 : 2.0 * p * rc / (p + rc);
}

ClassificationMetrics classification_metrics(
    const std::vector<std::vector<std::int32_t>>& predicted,
    const std::vector<std::vector<std::int32_t>>& gold,
    const std::vector<std::string>& label_universe) {
  ClassificationMetrics m;
  std::int64_t tp = 0, fp = 0, fn = 0;
  m.per_label.resize(label_universe.size());
  for (std::size_t l = 0; l < label_universe.size(); l++)
    m.per_label[l].label = label_universe[l];
  for (std::size_t r = 0; r < predicted.size(); r++) {
    for (std::int32_t l : predicted[r]) {
      if (std::find(gold[r].begin(), gold[r].end(), l) != gold[r].end())
        m.per_label[l].tp++;
      else
        m.per_label[l].fp++;
    }
    for (std::int32_t l : gold[r])
      if (std::find(predicted[r].begin(), predicted[r].end(), l) ==
          predicted[r].end())
        m.per_label[l].fn++;
  }
  for (auto& lm : m.per_label) {
    tp += lm.tp;
    fp += lm.fp;
    fn += lm.fn;
    lm.precision = lm.tp + lm.fp == 0
                       ? 0.0
                       : static_cast<double>(lm.tp) / (lm.tp + lm.fp);
    lm.recall =
        lm.tp + lm.fn == 0 ? 0.0 : static_cast<double>(lm.tp) / (lm.tp + lm.fn);
    lm.f1 = lm.precision + lm.recall == 0.0
                ? 0.0
                : 2.0 * lm.precision * lm.recall / (lm.precision + lm.recall);
  }
  m.micro_precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  m.micro_recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  m.micro_f1 = m.micro_precision + m.micro_recall == 0.0
                   ? 0.0
                   : 2.0 * m.micro_precision * m.micro_recall /
                         (m.micro_precision + m.micro_recall);
  return m;
}

}  // namespace mlt
