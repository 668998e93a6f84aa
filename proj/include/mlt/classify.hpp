#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlt/corpus.hpp"

namespace mlt {

struct FeatureSet {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;            // theta features
  std::vector<std::vector<std::int32_t>> labels;    // ids into label_universe
  std::vector<std::string> label_universe;
};

// Rows in document order; documents without an in-universe label or without
// any in-vocabulary tokens are excluded.
FeatureSet export_features(const std::vector<std::vector<double>>& theta,
                           const std::vector<RawDocument>& docs,
                           const std::vector<std::int64_t>& token_counts,
                           const std::vector<std::string>& label_universe);

void write_features_tsv(const std::string& path, const FeatureSet& features);

struct LinearClassifier {
  std::vector<std::string> label_universe;
  std::vector<std::vector<double>> weights;  // per label
  std::vector<double> bias;
  std::vector<std::string> degenerate_labels;  // no positive examples
  double chosen_inverse_reg = 1.0;
  int epochs = 0;
  std::uint64_t seed = 0;
};

// One-vs-rest L2-regularized hinge loss, trained with deterministic batch
// subgradient descent. The regularization strength (1/lambda grid) is chosen
// by cross-validated micro-F1 on the training rows, then the model is refit
// on everything.
LinearClassifier train_classifier(const FeatureSet& train, int folds,
                                  const std::vector<double>& inverse_reg_grid,
                                  std::uint64_t seed, int epochs = 500);

// A label is predicted iff its margin is strictly positive.
std::vector<std::vector<std::int32_t>> predict(
    const LinearClassifier& clf, const std::vector<std::vector<double>>& rows);

double micro_f1(const std::vector<std::vector<std::int32_t>>& predicted,
                const std::vector<std::vector<std::int32_t>>& gold);

struct LabelMetrics {
  std::string label;
  std::int64_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct ClassificationMetrics {
  double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;
  std::vector<LabelMetrics> per_label;
};

ClassificationMetrics classification_metrics(
    const std::vector<std::vector<std::int32_t>>& predicted,
    const std::vector<std::vector<std::int32_t>>& gold,
    const std::vector<std::string>& label_universe);

}  // namespace mlt
