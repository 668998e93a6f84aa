#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlt/corpus.hpp"

namespace mlt {

enum class TargetLevel { document, word };

struct SparseRow {
  // (source column, weight), sorted by column
  std::vector<std::pair<std::int32_t, double>> entries;
};

// Definition of a supervision matrix delta plus the prior vector it is added
// to: h(delta_row, N, xi) = delta_row * N + xi.
struct TransferSpec {
  TargetLevel level = TargetLevel::document;
  std::int32_t source_dim = 0;           // L1
  std::vector<SparseRow> rows;           // one per target object (L2)
  std::vector<double> prior;             // xi, dimension M

  std::uint64_t fingerprint() const;
  nlohmann::json debug_dump() const;  // row-major sparse triplets
};

// target_side selects the transfer direction: rows index documents of that
// side, columns documents of the other side.
TransferSpec build_doclink_delta(const PairedCorpus& corpus, int target_side,
                                 int topics, double alpha);

// Lexicon-overlap transfer distributions, thresholded at
// score > focus_threshold * row max and renormalized to sum 1.
TransferSpec build_softlink_delta(const PairedCorpus& corpus, const Lexicon& lex,
                                  int target_side, double focus_threshold,
                                  int topics, double alpha);

// One delta row applied to source statistics: prior + sum_col w * stats[col].
std::vector<double> apply_transfer(
    const TransferSpec& spec, std::size_t row,
    const std::vector<std::vector<std::int64_t>>& stats,
    const std::vector<double>& prior);

struct TreePath {
  std::int32_t cell;  // first-level cell: node id in [0,I) or I+untranslated idx
  std::int32_t node;  // internal node id, -1 for a root-attached leaf
  std::int32_t leaf;  // index into the node's word list for this language, -1
};

struct TreeNode {
  std::int32_t pair_multiplicity = 0;  // lexicon pairs inside the component
  std::array<std::vector<std::int32_t>, 2> words;  // per language, sorted
};

// Two-level Dirichlet tree: internal nodes group word translations
// (connected components of the bipartite translation graph); untranslated
// words hang off the root. First-level prior cells are beta_prime scaled by
// the node's pair multiplicity; within-node prior is symmetric beta_dprime.
struct TranslationTree {
  std::vector<TreeNode> nodes;
  std::array<std::vector<std::int32_t>, 2> untranslated;   // word ids, ascending
  std::array<std::vector<std::vector<TreePath>>, 2> paths; // [lang][word]
  std::array<std::vector<double>, 2> first_level_prior;    // [lang][cell]
  std::array<double, 2> first_level_prior_sum = {0.0, 0.0};
  double beta_prime = 0.01;
  double beta_dprime = 100.0;

  std::int32_t node_count() const { return static_cast<std::int32_t>(nodes.size()); }
  std::int32_t cell_count(int lang) const {
    return node_count() + static_cast<std::int32_t>(untranslated[lang].size());
  }
  std::uint64_t fingerprint() const;
  nlohmann::json debug_dump() const;
};

TranslationTree build_translation_tree(const Lexicon& lex,
                                       const Vocabulary& vocab1,
                                       const Vocabulary& vocab2,
                                       double beta_prime, double beta_dprime);

}  // namespace mlt
