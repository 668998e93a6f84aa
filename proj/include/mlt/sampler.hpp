#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlt/corpus.hpp"
#include "mlt/rng.hpp"
#include "mlt/transfer.hpp"

namespace mlt {

enum class ModelKind { lda, doclink, cbilda, softlink, voclink };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct Hyperparameters {
  int topics = 20;          // K
  double alpha = 0.1;       // symmetric document-topic prior
  double beta = 0.01;       // symmetric topic-word prior (flat models)
  double beta_prime = 0.01;   // tree first-level scalar
  double beta_dprime = 100.0; // tree within-node scalar
  double chi = 2.0;           // language-selector Beta(chi,chi)
  double focus_threshold = 0.8;
  int train_sweeps = 1000;
  int infer_sweeps = 200;
  int chains = 5;
  std::uint64_t seed = 0;
};

// The supervision needed by one model kind. Specs must outlive the sampler.
struct TransferPlan {
  ModelKind kind = ModelKind::lda;
  std::optional<TransferSpec> to_side1;  // doclink / cbilda / softlink
  std::optional<TransferSpec> to_side2;
  std::optional<TranslationTree> tree;   // voclink
};

TransferPlan build_plan(ModelKind kind, const PairedCorpus& corpus,
                        const Lexicon& lex, const Vocabulary& vocab1,
                        const Vocabulary& vocab2, const Hyperparameters& hyper);

struct TrainedModel {
  ModelKind kind = ModelKind::lda;
  Hyperparameters hyper;
  std::array<std::string, 2> langs;
  std::array<std::vector<std::string>, 2> vocab_types;
  std::array<std::uint64_t, 2> vocab_hash = {0, 0};
  // phi[side]: K x V row-major; theta[side]: D x K row-major
  std::array<std::vector<double>, 2> phi;
  std::array<std::vector<double>, 2> theta;
  // voclink estimates: root_phi[side] K x cells; node_phi[side][node] K x V_i
  std::array<std::vector<double>, 2> tree_root_phi;
  std::array<std::vector<std::vector<double>>, 2> tree_node_phi;
  std::uint64_t transfer_fingerprint = 0;
  std::uint64_t chain_seed = 0;

  int topics() const { return hyper.topics; }
  std::int32_t vocab_size(int side) const {
    return static_cast<std::int32_t>(vocab_types[side].size());
  }
  double phi_at(int side, int k, std::int32_t w) const {
    return phi[side][static_cast<std::size_t>(k) * vocab_types[side].size() + w];
  }

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static TrainedModel load(const std::string& path);
};

struct Assignments {
  std::array<std::vector<std::int32_t>, 2> topics;  // flattened token streams
  std::array<std::vector<std::int32_t>, 2> paths;   // voclink only, else empty
};

// All count tables plus per-token assignments for one Gibbs chain. One state
// is confined to one worker; chains run in parallel with independent seeds.
class SamplerState {
 public:
  SamplerState(ModelKind kind, const PairedCorpus& corpus,
               const Vocabulary& vocab1, const Vocabulary& vocab2,
               const TransferPlan& plan, const Hyperparameters& hyper,
               std::uint64_t seed);
  // Restore from checkpointed assignments (counts rebuilt, RNG reseeded).
  SamplerState(ModelKind kind, const PairedCorpus& corpus,
               const Vocabulary& vocab1, const Vocabulary& vocab2,
               const TransferPlan& plan, const Hyperparameters& hyper,
               std::uint64_t seed, const Assignments& restore);

  void sweep();
  // Same resampling pass over an explicit (side, doc) visit order.
  void sweep_with_order(const std::vector<std::pair<int, std::int32_t>>& order);

  // Normalized conditional over topics for one token (its own assignment
  // excluded); paths marginalized for voclink.
  std::vector<double> conditional(int side, std::int32_t doc, std::int64_t pos);
  // voclink: normalized over (topic, path) pairs, index k * paths + p.
  std::vector<double> conditional_paths(int side, std::int32_t doc,
                                        std::int64_t pos);

  struct TokenVotes {
    std::vector<double> doc;       // document-level vote, normalized
    std::vector<double> word;      // word-level vote, normalized
    std::vector<double> combined;  // normalized elementwise product
  };
  TokenVotes token_votes(int side, std::int32_t doc, std::int64_t pos);

  void check_invariants() const;  // throws std::logic_error on violation

  TrainedModel estimate(const Vocabulary& vocab1, const Vocabulary& vocab2) const;
  Assignments assignments() const;
  std::uint64_t count_checksum() const;

  ModelKind kind() const { return kind_; }
  int topics() const { return K_; }
  std::int32_t doc_count(int side) const { return doc_count_[side]; }
  std::int64_t token_count(int side) const {
    return static_cast<std::int64_t>(tokens_[side].size());
  }
  std::int64_t doc_length(int side, std::int32_t d) const {
    return doc_offset_[side][d + 1] - doc_offset_[side][d];
  }
  std::int32_t topic_of(int side, std::int32_t doc, std::int64_t pos) const {
    return z_[side][doc_offset_[side][doc] + pos];
  }
  const std::vector<std::int32_t>& doc_topic(int side) const {
    return doc_topic_[side];
  }
  const std::vector<std::int32_t>& word_topic(int side) const {
    return word_topic_[side];
  }
  const std::vector<std::int32_t>& topic_total(int side) const {
    return topic_total_[side];
  }

 private:
  void init_random();
  void rebuild_counts();
  void decrement(int side, std::int32_t doc, std::int64_t gpos);
  void increment(int side, std::int32_t doc, std::int64_t gpos);
  // Fills votes_ with unnormalized conditional mass; returns (total, count).
  std::pair<double, int> compute_votes(int side, std::int32_t doc,
                                       std::int64_t gpos);
  void refresh_doc_prior(int side, std::int32_t doc);
  void resample_document(int side, std::int32_t doc);
  std::int32_t path_count(int side, std::int32_t word, std::int32_t path,
                          int k) const;

  ModelKind kind_;
  Hyperparameters hp_;
  int K_;
  std::array<std::int32_t, 2> doc_count_;
  std::array<std::int32_t, 2> vocab_size_;
  std::array<double, 2> beta_total_;  // V * beta

  std::array<std::vector<std::int32_t>, 2> tokens_;
  std::array<std::vector<std::int64_t>, 2> doc_offset_;
  std::array<std::vector<std::int32_t>, 2> counterpart_;  // other-side doc or -1

  const TransferSpec* to_side_[2] = {nullptr, nullptr};
  const TranslationTree* tree_ = nullptr;

  std::array<std::vector<std::int32_t>, 2> z_;
  std::array<std::vector<std::int32_t>, 2> path_;

  std::array<std::vector<std::int32_t>, 2> doc_topic_;    // D x K
  std::array<std::vector<std::int32_t>, 2> word_topic_;   // V x K
  std::array<std::vector<std::int32_t>, 2> topic_total_;  // K

  // voclink
  std::array<std::vector<std::int32_t>, 2> cell_topic_;        // cells x K
  std::array<std::vector<std::int32_t>, 2> node_word_total_;   // I x K
  std::array<std::vector<std::int32_t>, 2> translated_total_;  // K
  // per-word per-path topic counts, allocated only for multi-path words
  std::array<std::vector<std::vector<std::int32_t>>, 2> word_path_topic_;

  Rng rng_;
  std::vector<double> votes_;
  std::vector<double> doc_prior_;  // alpha + live transfer, refreshed per doc
};

struct ChainResult {
  TrainedModel model;
  Assignments final_assignments;
  std::uint64_t count_checksum = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;
};

// Runs hyper.chains independent chains for hyper.train_sweeps sweeps each;
// chain c uses derive_seed(hyper.seed, c). `jobs` bounds worker threads; the
// result is independent of scheduling.
std::vector<ChainResult> train(ModelKind kind, const PairedCorpus& corpus,
                               const Vocabulary& vocab1, const Vocabulary& vocab2,
                               const TransferPlan& plan,
                               const Hyperparameters& hyper, int jobs = 1,
                               bool progress = false);

struct InferReport {
  std::int64_t total_tokens = 0;
  std::int64_t oov_tokens = 0;
  std::int64_t all_oov_docs = 0;
  std::int64_t empty_docs = 0;
};

struct InferResult {
  std::vector<std::vector<double>> theta;  // per document, length K
  std::vector<std::int64_t> token_counts;  // in-vocabulary tokens per document
  InferReport report;
};

// Held-out inference: phi held fixed, only document counts resampled, each
// document standalone (no crosslingual transfer). Out-of-vocabulary tokens
// are dropped and reported.
InferResult infer(const TrainedModel& model, int side,
                  const std::vector<RawDocument>& docs, std::uint64_t seed);

}  // namespace mlt
