#include "mlt/sampler.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

namespace mlt {

using nlohmann::json;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::lda: return "lda";
    case ModelKind::doclink: return "doclink";
    case ModelKind::cbilda: return "cbilda";
    case ModelKind::softlink: return "softlink";
    case ModelKind::voclink: return "voclink";
  }
  return "lda";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "lda") return ModelKind::lda;
  if (name == "doclink") return ModelKind::doclink;
  if (name == "cbilda") return ModelKind::cbilda;
  if (name == "softlink") return ModelKind::softlink;
  if (name == "voclink") return ModelKind::voclink;
  throw InputError("unknown model kind: \"" + name +
                   "\" (want lda|doclink|cbilda|softlink|voclink)");
}

TransferPlan build_plan(ModelKind kind, const PairedCorpus& corpus,
                        const Lexicon& lex, const Vocabulary& vocab1,
                        const Vocabulary& vocab2, const Hyperparameters& hyper) {
  TransferPlan plan;
  plan.kind = kind;
  switch (kind) {
    case ModelKind::lda:
      break;
    case ModelKind::doclink:
    case ModelKind::cbilda:
      plan.to_side1 = build_doclink_delta(corpus, 1, hyper.topics, hyper.alpha);
      plan.to_side2 = build_doclink_delta(corpus, 2, hyper.topics, hyper.alpha);
      break;
    case ModelKind::softlink:
      plan.to_side1 = build_softlink_delta(corpus, lex, 1, hyper.focus_threshold,
                                           hyper.topics, hyper.alpha);
      plan.to_side2 = build_softlink_delta(corpus, lex, 2, hyper.focus_threshold,
                                           hyper.topics, hyper.alpha);
      break;
    case ModelKind::voclink:
      plan.tree = build_translation_tree(lex, vocab1, vocab2, hyper.beta_prime,
                                         hyper.beta_dprime);
      break;
  }
  return plan;
}

SamplerState::SamplerState(ModelKind kind, const PairedCorpus& corpus,
                           const Vocabulary& vocab1, const Vocabulary& vocab2,
                           const TransferPlan& plan, const Hyperparameters& hyper,
                           std::uint64_t seed)
    : kind_(kind), hp_(hyper), K_(hyper.topics), rng_(seed) {
  if (K_ < 1) throw InputError("sampler: topics must be >= 1");
  if (plan.kind != kind) throw InputError("sampler: transfer plan kind mismatch");
  vocab_size_ = {vocab1.size(), vocab2.size()};
  doc_count_ = {static_cast<std::int32_t>(corpus.side1.size()),
                static_cast<std::int32_t>(corpus.side2.size())};
  beta_total_ = {vocab_size_[0] * hp_.beta, vocab_size_[1] * hp_.beta};

  for (int s = 0; s < 2; s++) {
    const auto& docs = s == 0 ? corpus.side1 : corpus.side2;
    doc_offset_[s].assign(1, 0);
    for (const auto& d : docs) {
      for (std::int32_t t : d.tokens) {
        if (t < 0 || t >= vocab_size_[s])
          throw InputError("sampler: token index out of vocabulary");
        tokens_[s].push_back(t);
      }
      doc_offset_[s].push_back(static_cast<std::int64_t>(tokens_[s].size()));
    }
    counterpart_[s].assign(doc_count_[s], -1);
  }
  for (const auto& [i, j] : corpus.pairs) {
    counterpart_[0][i] = j;
    counterpart_[1][j] = i;
  }

  const bool doc_transfer = kind == ModelKind::doclink ||
                            kind == ModelKind::cbilda ||
                            kind == ModelKind::softlink;
  if (doc_transfer) {
    if (!plan.to_side1 || !plan.to_side2)
      throw InputError("sampler: model needs transfer specs for both directions");
    to_side_[0] = &*plan.to_side1;
    to_side_[1] = &*plan.to_side2;
    for (int s = 0; s < 2; s++) {
      const TransferSpec* spec = to_side_[s];
      if (spec->level != TargetLevel::document ||
          spec->rows.size() != static_cast<std::size_t>(doc_count_[s]) ||
          spec->source_dim != doc_count_[1 - s])
        throw InputError("sampler: transfer spec shape does not match corpus");
      if (spec->prior.size() != static_cast<std::size_t>(K_))
        throw InputError("sampler: transfer prior dimension != topics");
      for (double p : spec->prior)
        if (p != hp_.alpha)
          throw InputError("sampler: transfer prior differs from alpha");
      if (kind == ModelKind::cbilda) {
        for (std::size_t d = 0; d < spec->rows.size(); d++) {
          const auto& e = spec->rows[d].entries;
          if (e.size() > 1 || (e.size() == 1 && e[0].second != 1.0))
            throw InputError("sampler: cbilda needs 0/1 document links");
          std::int32_t cp = e.empty() ? -1 : e[0].first;
          if (cp != counterpart_[s][d])
            throw InputError("sampler: cbilda spec disagrees with corpus pairs");
        }
      }
    }
  } else if (kind == ModelKind::voclink) {
    if (!plan.tree) throw InputError("sampler: voclink needs a translation tree");
    tree_ = &*plan.tree;
    for (int s = 0; s < 2; s++) {
      if (tree_->paths[s].size() != static_cast<std::size_t>(vocab_size_[s]))
        throw InputError("sampler: tree paths do not cover the vocabulary");
      for (std::int32_t w = 0; w < vocab_size_[s]; w++)
        if (tree_->paths[s][w].empty())
          throw InputError("sampler: word without a tree path");
    }
  }

  for (int s = 0; s < 2; s++) {
    z_[s].assign(tokens_[s].size(), 0);
    doc_topic_[s].assign(static_cast<std::size_t>(doc_count_[s]) * K_, 0);
    word_topic_[s].assign(static_cast<std::size_t>(vocab_size_[s]) * K_, 0);
    topic_total_[s].assign(K_, 0);
    if (tree_) {
      path_[s].assign(tokens_[s].size(), 0);
      cell_topic_[s].assign(
          static_cast<std::size_t>(tree_->cell_count(s)) * K_, 0);
      node_word_total_[s].assign(
          static_cast<std::size_t>(tree_->node_count()) * K_, 0);
      translated_total_[s].assign(K_, 0);
      word_path_topic_[s].resize(vocab_size_[s]);
      for (std::int32_t w = 0; w < vocab_size_[s]; w++)
        if (tree_->paths[s][w].size() > 1)
          word_path_topic_[s][w].assign(tree_->paths[s][w].size() * K_, 0);
    }
  }
  votes_.resize(static_cast<std::size_t>(K_) * (tree_ ? 4 : 1));
  doc_prior_.assign(K_, hp_.alpha);
  init_random();
}

SamplerState::SamplerState(ModelKind kind, const PairedCorpus& corpus,
                           const Vocabulary& vocab1, const Vocabulary& vocab2,
                           const TransferPlan& plan, const Hyperparameters& hyper,
                           std::uint64_t seed, const Assignments& restore)
    : SamplerState(kind, corpus, vocab1, vocab2, plan, hyper, seed) {
  for (int s = 0; s < 2; s++) {
    if (restore.topics[s].size() != z_[s].size())
      throw InputError("sampler restore: assignment length mismatch");
    z_[s] = restore.topics[s];
    for (std::int32_t t : z_[s])
      if (t < 0 || t >= K_) throw InputError("sampler restore: topic out of range");
    if (tree_) {
      // empty path arrays mean "first path everywhere" (assignments coming
      // from a flat model, or single-path trees)
      if (restore.paths[s].empty()) {
        std::fill(path_[s].begin(), path_[s].end(), 0);
      } else if (restore.paths[s].size() != path_[s].size()) {
        throw InputError("sampler restore: path length mismatch");
      } else {
        path_[s] = restore.paths[s];
        for (std::size_t i = 0; i < path_[s].size(); i++) {
          std::int32_t w = tokens_[s][i];
          if (path_[s][i] < 0 ||
              path_[s][i] >=
                  static_cast<std::int32_t>(tree_->paths[s][w].size()))
            throw InputError("sampler restore: path index out of range");
        }
      }
    }
  }
  rebuild_counts();
}

void SamplerState::init_random() {
  for (int s = 0; s < 2; s++)
    for (std::size_t i = 0; i < tokens_[s].size(); i++) {
      z_[s][i] = static_cast<std::int32_t>(rng_.below(K_));
      if (tree_) {
        const auto& pl = tree_->paths[s][tokens_[s][i]];
        path_[s][i] = pl.size() > 1
                          ? static_cast<std::int32_t>(
                                rng_.below(static_cast<std::uint32_t>(pl.size())))
                          : 0;
      }
    }
  rebuild_counts();
}

void SamplerState::rebuild_counts() {
  for (int s = 0; s < 2; s++) {
    std::fill(doc_topic_[s].begin(), doc_topic_[s].end(), 0);
    std::fill(word_topic_[s].begin(), word_topic_[s].end(), 0);
    std::fill(topic_total_[s].begin(), topic_total_[s].end(), 0);
    if (tree_) {
      std::fill(cell_topic_[s].begin(), cell_topic_[s].end(), 0);
      std::fill(node_word_total_[s].begin(), node_word_total_[s].end(), 0);
      std::fill(translated_total_[s].begin(), translated_total_[s].end(), 0);
      for (auto& v : word_path_topic_[s]) std::fill(v.begin(), v.end(), 0);
    }
    for (std::int32_t d = 0; d < doc_count_[s]; d++)
      for (std::int64_t g = doc_offset_[s][d]; g < doc_offset_[s][d + 1]; g++)
        increment(s, d, g);
  }
}

void SamplerState::decrement(int side, std::int32_t doc, std::int64_t gpos) {
  const std::int32_t k = z_[side][gpos];
  const std::int32_t w = tokens_[side][gpos];
  doc_topic_[side][static_cast<std::size_t>(doc) * K_ + k]--;
  word_topic_[side][static_cast<std::size_t>(w) * K_ + k]--;
  topic_total_[side][k]--;
  if (tree_) {
    const std::int32_t p = path_[side][gpos];
    const TreePath& tp = tree_->paths[side][w][p];
    cell_topic_[side][static_cast<std::size_t>(tp.cell) * K_ + k]--;
    if (tp.node >= 0) {
      node_word_total_[side][static_cast<std::size_t>(tp.node) * K_ + k]--;
      translated_total_[side][k]--;
      if (!word_path_topic_[side][w].empty())
        word_path_topic_[side][w][static_cast<std::size_t>(p) * K_ + k]--;
    }
  }
}

void SamplerState::increment(int side, std::int32_t doc, std::int64_t gpos) {
  const std::int32_t k = z_[side][gpos];
  const std::int32_t w = tokens_[side][gpos];
  doc_topic_[side][static_cast<std::size_t>(doc) * K_ + k]++;
  word_topic_[side][static_cast<std::size_t>(w) * K_ + k]++;
  topic_total_[side][k]++;
  if (tree_) {
    const std::int32_t p = path_[side][gpos];
    const TreePath& tp = tree_->paths[side][w][p];
    cell_topic_[side][static_cast<std::size_t>(tp.cell) * K_ + k]++;
    if (tp.node >= 0) {
      node_word_total_[side][static_cast<std::size_t>(tp.node) * K_ + k]++;
      translated_total_[side][k]++;
      if (!word_path_topic_[side][w].empty())
        word_path_topic_[side][w][static_cast<std::size_t>(p) * K_ + k]++;
    }
  }
}

std::int32_t SamplerState::path_count(int side, std::int32_t word,
                                      std::int32_t path, int k) const {
  const auto& per_path = word_path_topic_[side][word];
  if (per_path.empty())
    return word_topic_[side][static_cast<std::size_t>(word) * K_ + k];
  return per_path[static_cast<std::size_t>(path) * K_ + k];
}

void SamplerState::refresh_doc_prior(int side, std::int32_t doc) {
  std::fill(doc_prior_.begin(), doc_prior_.end(), hp_.alpha);
  const TransferSpec* spec = to_side_[side];
  if (!spec) return;
  const int other = 1 - side;
  for (const auto& [col, w] : spec->rows[doc].entries) {
    const std::int32_t* h = &doc_topic_[other][static_cast<std::size_t>(col) * K_];
    for (int k = 0; k < K_; k++) doc_prior_[k] += w * h[k];
  }
}

std::pair<double, int> SamplerState::compute_votes(int side, std::int32_t doc,
                                                   std::int64_t gpos) {
  const std::int32_t w = tokens_[side][gpos];
  const std::int32_t* dt = &doc_topic_[side][static_cast<std::size_t>(doc) * K_];
  double total = 0.0;
  if (!tree_) {
    const std::int32_t* wt = &word_topic_[side][static_cast<std::size_t>(w) * K_];
    const std::int32_t* tt = topic_total_[side].data();
    const double beta = hp_.beta, vbeta = beta_total_[side];
    if (kind_ == ModelKind::cbilda) {
      const std::int32_t cp = counterpart_[side][doc];
      const std::int32_t* cdt =
          cp >= 0 ? &doc_topic_[1 - side][static_cast<std::size_t>(cp) * K_]
                  : nullptr;
      const double chi = hp_.chi;
      for (int k = 0; k < K_; k++) {
        const double other = cdt ? cdt[k] : 0.0;
        double v = (dt[k] + doc_prior_[k]) * ((wt[k] + beta) / (tt[k] + vbeta));
        // collapsed Bernoulli-Beta language selector
        v *= (dt[k] + chi) / (dt[k] + other + 2.0 * chi);
        votes_[k] = v;
        total += v;
      }
    } else {
      for (int k = 0; k < K_; k++) {
        const double v =
            (dt[k] + doc_prior_[k]) * ((wt[k] + beta) / (tt[k] + vbeta));
        votes_[k] = v;
        total += v;
      }
    }
    return {total, K_};
  }

  const int other = 1 - side;
  const auto& paths = tree_->paths[side][w];
  const int np = static_cast<int>(paths.size());
  const std::int32_t node_count = tree_->node_count();
  const double* flp = tree_->first_level_prior[side].data();
  const double flp_sum = tree_->first_level_prior_sum[side];
  const double b2 = tree_->beta_dprime;
  if (static_cast<int>(votes_.size()) < K_ * np) votes_.resize(K_ * np);
  for (int k = 0; k < K_; k++) {
    const double docv = dt[k] + doc_prior_[k];
    const double den = topic_total_[side][k] + translated_total_[other][k] +
                       flp_sum;
    for (int p = 0; p < np; p++) {
      const TreePath& tp = paths[p];
      double transfer =
          tp.cell < node_count
              ? cell_topic_[other][static_cast<std::size_t>(tp.cell) * K_ + k]
              : 0.0;
      const double num =
          cell_topic_[side][static_cast<std::size_t>(tp.cell) * K_ + k] +
          transfer + flp[tp.cell];
      double v = docv * (num / den);
      if (tp.node >= 0) {
        const double vn = static_cast<double>(
            tree_->nodes[tp.node].words[side].size());
        v *= (path_count(side, w, p, k) + b2) /
             (node_word_total_[side][static_cast<std::size_t>(tp.node) * K_ + k] +
              vn * b2);
      }
      votes_[static_cast<std::size_t>(k) * np + p] = v;
      total += v;
    }
  }
  return {total, K_ * np};
}

void SamplerState::resample_document(int side, std::int32_t doc) {
  refresh_doc_prior(side, doc);
  const std::int64_t begin = doc_offset_[side][doc];
  const std::int64_t end = doc_offset_[side][doc + 1];
  for (std::int64_t g = begin; g < end; g++) {
    decrement(side, doc, g);
    const auto [total, nv] = compute_votes(side, doc, g);
    const double u = rng_.uniform01() * total;
    int idx = nv - 1;
    double acc = 0.0;
    for (int i = 0; i < nv; i++) {
      acc += votes_[i];
      if (u < acc) {
        idx = i;
        break;
      }
    }
    if (tree_) {
      const int np = nv / K_;
      z_[side][g] = idx / np;
      path_[side][g] = idx % np;
    } else {
      z_[side][g] = idx;
    }
    increment(side, doc, g);
  }
}

void SamplerState::sweep() {
  for (int s = 0; s < 2; s++)
    for (std::int32_t d = 0; d < doc_count_[s]; d++) resample_document(s, d);
#ifndef NDEBUG
  check_invariants();
#endif
}

void SamplerState::sweep_with_order(
    const std::vector<std::pair<int, std::int32_t>>& order) {
  for (const auto& [s, d] : order) resample_document(s, d);
#ifndef NDEBUG
  check_invariants();
#endif
}

std::vector<double> SamplerState::conditional_paths(int side, std::int32_t doc,
                                                    std::int64_t pos) {
  const std::int64_t g = doc_offset_[side][doc] + pos;
  refresh_doc_prior(side, doc);
  decrement(side, doc, g);
  const auto [total, nv] = compute_votes(side, doc, g);
  std::vector<double> out(votes_.begin(), votes_.begin() + nv);
  increment(side, doc, g);
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> SamplerState::conditional(int side, std::int32_t doc,
                                              std::int64_t pos) {
  std::vector<double> full = conditional_paths(side, doc, pos);
  if (!tree_) return full;
  const int np = static_cast<int>(full.size()) / K_;
  std::vector<double> out(K_, 0.0);
  for (int k = 0; k < K_; k++)
    for (int p = 0; p < np; p++) out[k] += full[static_cast<std::size_t>(k) * np + p];
  return out;
}

SamplerState::TokenVotes SamplerState::token_votes(int side, std::int32_t doc,
                                                   std::int64_t pos) {
  const std::int64_t g = doc_offset_[side][doc] + pos;
  const std::int32_t w = tokens_[side][g];
  refresh_doc_prior(side, doc);
  decrement(side, doc, g);

  TokenVotes tv;
  tv.doc.resize(K_);
  tv.word.resize(K_);
  tv.combined.resize(K_);
  const std::int32_t* dt = &doc_topic_[side][static_cast<std::size_t>(doc) * K_];
  for (int k = 0; k < K_; k++) tv.doc[k] = dt[k] + doc_prior_[k];
  if (kind_ == ModelKind::cbilda) {
    const std::int32_t cp = counterpart_[side][doc];
    const std::int32_t* cdt =
        cp >= 0 ? &doc_topic_[1 - side][static_cast<std::size_t>(cp) * K_]
                : nullptr;
    for (int k = 0; k < K_; k++) {
      const double other = cdt ? cdt[k] : 0.0;
      tv.doc[k] *= (dt[k] + hp_.chi) / (dt[k] + other + 2.0 * hp_.chi);
    }
  }
  if (!tree_) {
    const std::int32_t* wt = &word_topic_[side][static_cast<std::size_t>(w) * K_];
    for (int k = 0; k < K_; k++)
      tv.word[k] =
          (wt[k] + hp_.beta) / (topic_total_[side][k] + beta_total_[side]);
  } else {
    const int other = 1 - side;
    const auto& paths = tree_->paths[side][w];
    const std::int32_t node_count = tree_->node_count();
    const double flp_sum = tree_->first_level_prior_sum[side];
    const double b2 = tree_->beta_dprime;
    for (int k = 0; k < K_; k++) {
      const double den =
          topic_total_[side][k] + translated_total_[other][k] + flp_sum;
      double m = 0.0;
      for (std::size_t p = 0; p < paths.size(); p++) {
        const TreePath& tp = paths[p];
        double transfer =
            tp.cell < node_count
                ? cell_topic_[other][static_cast<std::size_t>(tp.cell) * K_ + k]
                : 0.0;
        double v =
            (cell_topic_[side][static_cast<std::size_t>(tp.cell) * K_ + k] +
             transfer + tree_->first_level_prior[side][tp.cell]) /
            den;
        if (tp.node >= 0) {
          const double vn =
              static_cast<double>(tree_->nodes[tp.node].words[side].size());
          v *= (path_count(side, w, static_cast<std::int32_t>(p), k) + b2) /
               (node_word_total_[side]
                    [static_cast<std::size_t>(tp.node) * K_ + k] +
                vn * b2);
        }
        m += v;
      }
      tv.word[k] = m;
    }
  }
  increment(side, doc, g);

  double sd = 0.0, sw = 0.0, sc = 0.0;
  for (int k = 0; k < K_; k++) {
    tv.combined[k] = tv.doc[k] * tv.word[k];
    sd += tv.doc[k];
    sw += tv.word[k];
    sc += tv.combined[k];
  }
  for (int k = 0; k < K_; k++) {
    tv.doc[k] /= sd;
    tv.word[k] /= sw;
    tv.combined[k] /= sc;
  }
  return tv;
}

void SamplerState::check_invariants() const {
  auto fail = [](const std::string& what) {
    throw std::logic_error("sampler invariant violated: " + what);
  };
  for (int s = 0; s < 2; s++) {
    for (std::int32_t d = 0; d < doc_count_[s]; d++) {
      std::int64_t sum = 0;
      for (int k = 0; k < K_; k++) {
        const std::int32_t c = doc_topic_[s][static_cast<std::size_t>(d) * K_ + k];
        if (c < 0) fail("negative doc-topic count");
        sum += c;
      }
      if (sum != doc_length(s, d)) fail("doc-topic counts != document length");
    }
    std::vector<std::int64_t> per_topic(K_, 0);
    for (std::int32_t w = 0; w < vocab_size_[s]; w++)
      for (int k = 0; k < K_; k++) {
        const std::int32_t c = word_topic_[s][static_cast<std::size_t>(w) * K_ + k];
        if (c < 0) fail("negative word-topic count");
        per_topic[k] += c;
      }
    for (int k = 0; k < K_; k++)
      if (per_topic[k] != topic_total_[s][k])
        fail("word-topic column sum != topic total");
    if (tree_) {
      std::vector<std::int64_t> cell_sum(K_, 0), node_side(K_, 0);
      const std::int32_t cells = tree_->cell_count(s);
      for (std::int32_t c = 0; c < cells; c++)
        for (int k = 0; k < K_; k++) {
          const std::int32_t v =
              cell_topic_[s][static_cast<std::size_t>(c) * K_ + k];
          if (v < 0) fail("negative cell count");
          cell_sum[k] += v;
          if (c < tree_->node_count()) node_side[k] += v;
        }
      for (int k = 0; k < K_; k++) {
        if (cell_sum[k] != topic_total_[s][k])
          fail("first-level cell sums != topic total");
        if (node_side[k] != translated_total_[s][k])
          fail("translated totals out of sync");
      }
      for (std::int32_t i = 0; i < tree_->node_count(); i++) {
        std::vector<std::int64_t> in_node(K_, 0);
        for (std::int32_t w : tree_->nodes[i].words[s]) {
          const auto& pl = tree_->paths[s][w];
          for (std::size_t p = 0; p < pl.size(); p++)
            if (pl[p].node == i)
              for (int k = 0; k < K_; k++)
                in_node[k] += path_count(s, w, static_cast<std::int32_t>(p), k);
        }
        for (int k = 0; k < K_; k++)
          if (in_node[k] !=
              node_word_total_[s][static_cast<std::size_t>(i) * K_ + k])
            fail("within-node totals out of sync");
      }
    }
  }
}

TrainedModel SamplerState::estimate(const Vocabulary& vocab1,
                                    const Vocabulary& vocab2) const {
  TrainedModel m;
  m.kind = kind_;
  m.hyper = hp_;
  m.langs = {vocab1.lang, vocab2.lang};
  m.vocab_types = {vocab1.types, vocab2.types};
  m.vocab_hash = {vocab1.hash(), vocab2.hash()};
  if (to_side_[0]) {
    m.transfer_fingerprint = to_side_[0]->fingerprint();
    m.transfer_fingerprint =
        fnv1a64_values(&m.transfer_fingerprint, 1, to_side_[1]->fingerprint());
  } else if (tree_) {
    m.transfer_fingerprint = tree_->fingerprint();
  }

  for (int s = 0; s < 2; s++) {
    const std::int32_t v = vocab_size_[s];
    m.phi[s].assign(static_cast<std::size_t>(K_) * v, 0.0);
    if (!tree_) {
      for (int k = 0; k < K_; k++) {
        const double den = topic_total_[s][k] + beta_total_[s];
        for (std::int32_t w = 0; w < v; w++)
          m.phi[s][static_cast<std::size_t>(k) * v + w] =
              (word_topic_[s][static_cast<std::size_t>(w) * K_ + k] + hp_.beta) /
              den;
      }
    } else {
      const int other = 1 - s;
      const std::int32_t cells = tree_->cell_count(s);
      const std::int32_t node_count = tree_->node_count();
      m.tree_root_phi[s].assign(static_cast<std::size_t>(K_) * cells, 0.0);
      for (int k = 0; k < K_; k++) {
        const double den = topic_total_[s][k] + translated_total_[other][k] +
                           tree_->first_level_prior_sum[s];
        for (std::int32_t c = 0; c < cells; c++) {
          double transfer =
              c < node_count
                  ? cell_topic_[other][static_cast<std::size_t>(c) * K_ + k]
                  : 0.0;
          m.tree_root_phi[s][static_cast<std::size_t>(k) * cells + c] =
              (cell_topic_[s][static_cast<std::size_t>(c) * K_ + k] + transfer +
               tree_->first_level_prior[s][c]) /
              den;
        }
      }
      m.tree_node_phi[s].resize(node_count);
      for (std::int32_t i = 0; i < node_count; i++) {
        const auto& words = tree_->nodes[i].words[s];
        const double vn = static_cast<double>(words.size());
        m.tree_node_phi[s][i].assign(static_cast<std::size_t>(K_) * words.size(),
                                     0.0);
        for (int k = 0; k < K_; k++) {
          const double den =
              node_word_total_[s][static_cast<std::size_t>(i) * K_ + k] +
              vn * tree_->beta_dprime;
          for (std::size_t leaf = 0; leaf < words.size(); leaf++) {
            const std::int32_t w = words[leaf];
            const auto& pl = tree_->paths[s][w];
            std::int32_t p = 0;
            for (std::size_t q = 0; q < pl.size(); q++)
              if (pl[q].node == i) p = static_cast<std::int32_t>(q);
            m.tree_node_phi[s][i][static_cast<std::size_t>(k) * words.size() +
                                  leaf] =
                (path_count(s, w, p, k) + tree_->beta_dprime) / den;
          }
        }
      }
      // flat estimate: path products summed over each word's paths
      for (int k = 0; k < K_; k++)
        for (std::int32_t w = 0; w < v; w++) {
          double mass = 0.0;
          for (const TreePath& tp : tree_->paths[s][w]) {
            double t =
                m.tree_root_phi[s][static_cast<std::size_t>(k) * cells + tp.cell];
            if (tp.node >= 0)
              t *= m.tree_node_phi[s][tp.node]
                                  [static_cast<std::size_t>(k) *
                                       tree_->nodes[tp.node].words[s].size() +
                                   tp.leaf];
            mass += t;
          }
          m.phi[s][static_cast<std::size_t>(k) * v + w] = mass;
        }
    }

    m.theta[s].assign(static_cast<std::size_t>(doc_count_[s]) * K_, 0.0);
    std::vector<double> prior(K_);
    for (std::int32_t d = 0; d < doc_count_[s]; d++) {
      std::fill(prior.begin(), prior.end(), hp_.alpha);
      if (to_side_[s])
        for (const auto& [col, wgt] : to_side_[s]->rows[d].entries) {
          const std::int32_t* h =
              &doc_topic_[1 - s][static_cast<std::size_t>(col) * K_];
          for (int k = 0; k < K_; k++) prior[k] += wgt * h[k];
        }
      double den = static_cast<double>(doc_length(s, d));
      for (int k = 0; k < K_; k++) den += prior[k];
      for (int k = 0; k < K_; k++)
        m.theta[s][static_cast<std::size_t>(d) * K_ + k] =
            (doc_topic_[s][static_cast<std::size_t>(d) * K_ + k] + prior[k]) /
            den;
    }
  }
  return m;
}

Assignments SamplerState::assignments() const {
  Assignments a;
  a.topics = z_;
  if (tree_) a.paths = path_;
  return a;
}

std::uint64_t SamplerState::count_checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int s = 0; s < 2; s++) {
    h = fnv1a64_values(doc_topic_[s].data(), doc_topic_[s].size(), h);
    h = fnv1a64_values(word_topic_[s].data(), word_topic_[s].size(), h);
    h = fnv1a64_values(topic_total_[s].data(), topic_total_[s].size(), h);
    if (tree_) {
      h = fnv1a64_values(cell_topic_[s].data(), cell_topic_[s].size(), h);
      h = fnv1a64_values(node_word_total_[s].data(), node_word_total_[s].size(),
                         h);
      h = fnv1a64_values(translated_total_[s].data(),
                         translated_total_[s].size(), h);
    }
  }
  return h;
}

static json hyper_to_json(const Hyperparameters& h) {
  return json{{"topics", h.topics},
              {"alpha", h.alpha},
              {"beta", h.beta},
              {"beta_prime", h.beta_prime},
              {"beta_dprime", h.beta_dprime},
              {"chi", h.chi},
              {"focus_threshold", h.focus_threshold},
              {"train_sweeps", h.train_sweeps},
              {"infer_sweeps", h.infer_sweeps},
              {"chains", h.chains},
              {"seed", h.seed}};
}

static Hyperparameters hyper_from_json(const json& j) {
  Hyperparameters h;
  h.topics = j.at("topics").get<int>();
  h.alpha = j.at("alpha").get<double>();
  h.beta = j.at("beta").get<double>();
  h.beta_prime = j.at("beta_prime").get<double>();
  h.beta_dprime = j.at("beta_dprime").get<double>();
  h.chi = j.at("chi").get<double>();
  h.focus_threshold = j.at("focus_threshold").get<double>();
  h.train_sweeps = j.at("train_sweeps").get<int>();
  h.infer_sweeps = j.at("infer_sweeps").get<int>();
  h.chains = j.at("chains").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

json TrainedModel::to_json() const {
  json j;
  j["schema"] = 1;
  j["kind"] = mlt::to_string(kind);
  j["hyper"] = hyper_to_json(hyper);
  j["langs"] = langs;
  j["vocab1"] = vocab_types[0];
  j["vocab2"] = vocab_types[1];
  j["vocab_hash1"] = hex64(vocab_hash[0]);
  j["vocab_hash2"] = hex64(vocab_hash[1]);
  j["transfer_fingerprint"] = hex64(transfer_fingerprint);
  j["chain_seed"] = chain_seed;
  j["phi1"] = phi[0];
  j["phi2"] = phi[1];
  j["theta1"] = theta[0];
  j["theta2"] = theta[1];
  if (kind == ModelKind::voclink) {
    j["tree_root_phi1"] = tree_root_phi[0];
    j["tree_root_phi2"] = tree_root_phi[1];
    j["tree_node_phi1"] = tree_node_phi[0];
    j["tree_node_phi2"] = tree_node_phi[1];
  }
  return j;
}

TrainedModel TrainedModel::from_json(const json& j) {
  TrainedModel m;
  m.kind = model_kind_from_string(j.at("kind").get<std::string>());
  m.hyper = hyper_from_json(j.at("hyper"));
  auto langs = j.at("langs").get<std::vector<std::string>>();
  if (langs.size() != 2) throw InputError("model file: want two languages");
  m.langs = {langs[0], langs[1]};
  m.vocab_types[0] = j.at("vocab1").get<std::vector<std::string>>();
  m.vocab_types[1] = j.at("vocab2").get<std::vector<std::string>>();
  m.vocab_hash[0] = std::stoull(j.at("vocab_hash1").get<std::string>(), nullptr, 16);
  m.vocab_hash[1] = std::stoull(j.at("vocab_hash2").get<std::string>(), nullptr, 16);
  m.transfer_fingerprint =
      std::stoull(j.at("transfer_fingerprint").get<std::string>(), nullptr, 16);
  m.chain_seed = j.at("chain_seed").get<std::uint64_t>();
  m.phi[0] = j.at("phi1").get<std::vector<double>>();
  m.phi[1] = j.at("phi2").get<std::vector<double>>();
  m.theta[0] = j.at("theta1").get<std::vector<double>>();
  m.theta[1] = j.at("theta2").get<std::vector<double>>();
  if (m.kind == ModelKind::voclink) {
    m.tree_root_phi[0] = j.at("tree_root_phi1").get<std::vector<double>>();
    m.tree_root_phi[1] = j.at("tree_root_phi2").get<std::vector<double>>();
    m.tree_node_phi[0] =
        j.at("tree_node_phi1").get<std::vector<std::vector<double>>>();
    m.tree_node_phi[1] =
        j.at("tree_node_phi2").get<std::vector<std::vector<double>>>();
  }
  for (int s = 0; s < 2; s++) {
    const std::size_t v = m.vocab_types[s].size();
    if (m.phi[s].size() != static_cast<std::size_t>(m.hyper.topics) * v)
      throw InputError("model file: phi size mismatch");
    if (m.theta[s].size() % m.hyper.topics != 0)
      throw InputError("model file: theta size mismatch");
  }
  return m;
}

void TrainedModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file: " + path);
  out << to_json().dump(2) << "\n";
}

TrainedModel TrainedModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed model file: " + e.what());
  }
  return from_json(j);
}

std::vector<ChainResult> train(ModelKind kind, const PairedCorpus& corpus,
                               const Vocabulary& vocab1, const Vocabulary& vocab2,
                               const TransferPlan& plan,
                               const Hyperparameters& hyper, int jobs,
                               bool progress) {
  const int chains = std::max(1, hyper.chains);
  std::vector<ChainResult> results(chains);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= chains) return;
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t seed = derive_seed(hyper.seed, c);
      SamplerState state(kind, corpus, vocab1, vocab2, plan, hyper, seed);
      for (int s = 1; s <= hyper.train_sweeps; s++) {
        state.sweep();
        if (progress) {
          const double ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
          std::fprintf(stderr, "%d\t%s\t%d\t%.1f\n", s,
                       to_string(kind).c_str(), c, ms);
        }
      }
      state.check_invariants();
      ChainResult& r = results[c];
      r.model = state.estimate(vocab1, vocab2);
      r.model.chain_seed = seed;
      r.final_assignments = state.assignments();
      r.count_checksum = state.count_checksum();
      r.seed = seed;
      r.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    }
  };
  const int workers = std::max(1, std::min(jobs, chains));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; i++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

InferResult infer(const TrainedModel& model, int side,
                  const std::vector<RawDocument>& docs, std::uint64_t seed) {
  const int K = model.topics();
  const double alpha = model.hyper.alpha;
  const std::int32_t v = model.vocab_size(side);
  std::unordered_map<std::string, std::int32_t> index;
  index.reserve(v);
  for (std::int32_t w = 0; w < v; w++)
    index.emplace(model.vocab_types[side][w], w);

  InferResult out;
  out.theta.resize(docs.size());
  out.token_counts.resize(docs.size());
  std::vector<std::int32_t> ids;
  std::vector<std::int32_t> z;
  std::vector<std::int32_t> counts(K);
  std::vector<double> votes(K);
  for (std::size_t d = 0; d < docs.size(); d++) {
    ids.clear();
    for (const auto& t : docs[d].tokens) {
      auto it = index.find(t);
      if (it == index.end())
        out.report.oov_tokens++;
      else
        ids.push_back(it->second);
      out.report.total_tokens++;
    }
    out.token_counts[d] = static_cast<std::int64_t>(ids.size());
    if (docs[d].tokens.empty()) out.report.empty_docs++;
    else if (ids.empty()) out.report.all_oov_docs++;

    Rng rng(derive_seed(seed, d));
    std::fill(counts.begin(), counts.end(), 0);
    z.assign(ids.size(), 0);
    for (std::size_t i = 0; i < ids.size(); i++) {
      z[i] = static_cast<std::int32_t>(rng.below(K));
      counts[z[i]]++;
    }
    for (int sweep = 0; sweep < model.hyper.infer_sweeps && !ids.empty();
         sweep++) {
      for (std::size_t i = 0; i < ids.size(); i++) {
        counts[z[i]]--;
        double total = 0.0;
        for (int k = 0; k < K; k++) {
          const double p = (counts[k] + alpha) * model.phi_at(side, k, ids[i]);
          votes[k] = p;
          total += p;
        }
        const double u = rng.uniform01() * total;
        int pick = K - 1;
        double acc = 0.0;
        for (int k = 0; k < K; k++) {
          acc += votes[k];
          if (u < acc) {
            pick = k;
            break;
          }
        }
        z[i] = pick;
        counts[pick]++;
      }
    }
    auto& theta = out.theta[d];
    theta.resize(K);
    const double den = static_cast<double>(ids.size()) + K * alpha;
    for (int k = 0; k < K; k++) theta[k] = (counts[k] + alpha) / den;
  }
  return out;
}

}  // namespace mlt
