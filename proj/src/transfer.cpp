#include "mlt/transfer.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace mlt {

using nlohmann::json;

std::uint64_t TransferSpec::fingerprint() const {
  std::uint64_t h = fnv1a64_values(&source_dim, 1);
  h = fnv1a64_values(prior.data(), prior.size(), h);
  for (const auto& row : rows) {
    std::size_t n = row.entries.size();
    h = fnv1a64_values(&n, 1, h);
    for (const auto& [col, w] : row.entries) {
      h = fnv1a64_values(&col, 1, h);  // field-wise: pair padding is indeterminate
      h = fnv1a64_values(&w, 1, h);
    }
  }
  return h;
}

json TransferSpec::debug_dump() const {
  json triplets = json::array();
  for (std::size_t r = 0; r < rows.size(); r++)
    for (const auto& [c, w] : rows[r].entries)
      triplets.push_back({r, c, w});
  return json{{"level", level == TargetLevel::document ? "document" : "word"},
              {"source_dim", source_dim},
              {"target_dim", rows.size()},
              {"prior", prior},
              {"triplets", triplets}};
}

TransferSpec build_doclink_delta(const PairedCorpus& corpus, int target_side,
                                 int topics, double alpha) {
  if (target_side != 1 && target_side != 2)
    throw InputError("build_doclink_delta: target_side must be 1 or 2");
  TransferSpec spec;
  spec.level = TargetLevel::document;
  const bool t2 = target_side == 2;
  spec.source_dim =
      static_cast<std::int32_t>(t2 ? corpus.side1.size() : corpus.side2.size());
  spec.rows.resize(t2 ? corpus.side2.size() : corpus.side1.size());
  for (const auto& [i, j] : corpus.pairs) {
    if (t2)
      spec.rows[j].entries.emplace_back(i, 1.0);
    else
      spec.rows[i].entries.emplace_back(j, 1.0);
  }
  spec.prior.assign(topics, alpha);
  return spec;
}

TransferSpec build_softlink_delta(const PairedCorpus& corpus, const Lexicon& lex,
                                  int target_side, double focus_threshold,
                                  int topics, double alpha) {
  if (target_side != 1 && target_side != 2)
    throw InputError("build_softlink_delta: target_side must be 1 or 2");
  if (focus_threshold < 0.0 || focus_threshold > 1.0)
    throw InputError("build_softlink_delta: focus threshold must be in [0,1]");
  const bool t2 = target_side == 2;
  const auto& src_docs = t2 ? corpus.side1 : corpus.side2;
  const auto& tgt_docs = t2 ? corpus.side2 : corpus.side1;

  auto type_set = [](const Document& d) {
    std::vector<std::int32_t> t(d.tokens.begin(), d.tokens.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  };

  std::vector<std::vector<std::int32_t>> src_types(src_docs.size());
  std::int32_t max_src_word = -1;
  for (std::size_t s = 0; s < src_docs.size(); s++) {
    src_types[s] = type_set(src_docs[s]);
    if (!src_types[s].empty()) max_src_word = std::max(max_src_word, src_types[s].back());
  }

  // Inverted index over source docs, and lexicon grouped by target word.
  std::vector<std::vector<std::int32_t>> docs_with(
      static_cast<std::size_t>(max_src_word + 1));
  for (std::size_t s = 0; s < src_docs.size(); s++)
    for (std::int32_t w : src_types[s])
      docs_with[w].push_back(static_cast<std::int32_t>(s));

  std::unordered_map<std::int32_t, std::vector<std::int32_t>> src_words_of_tgt;
  for (const auto& [a, b] : lex.entries) {
    std::int32_t src_w = t2 ? a : b;
    std::int32_t tgt_w = t2 ? b : a;
    if (src_w <= max_src_word) src_words_of_tgt[tgt_w].push_back(src_w);
  }

  TransferSpec spec;
  spec.level = TargetLevel::document;
  spec.source_dim = static_cast<std::int32_t>(src_docs.size());
  spec.rows.resize(tgt_docs.size());
  spec.prior.assign(topics, alpha);

  std::vector<std::int32_t> overlap(src_docs.size(), 0);
  std::vector<std::int32_t> touched;
  for (std::size_t t = 0; t < tgt_docs.size(); t++) {
    const auto tgt = type_set(tgt_docs[t]);
    touched.clear();
    // intersection = number of distinct lexicon pairs with one side in each doc
    for (std::int32_t w2 : tgt) {
      auto it = src_words_of_tgt.find(w2);
      if (it == src_words_of_tgt.end()) continue;
      for (std::int32_t w1 : it->second)
        for (std::int32_t s : docs_with[w1]) {
          if (overlap[s] == 0) touched.push_back(s);
          overlap[s]++;
        }
    }
    if (touched.empty()) continue;
    std::sort(touched.begin(), touched.end());
    double best = 0.0;
    std::vector<std::pair<std::int32_t, double>> scored;
    scored.reserve(touched.size());
    for (std::int32_t s : touched) {
      double inter = overlap[s];
      // union can collapse to zero under dense many-to-many entries; clamp
      double uni = std::max<double>(
          1.0, static_cast<double>(src_types[s].size()) +
                   static_cast<double>(tgt.size()) - inter);
      double score = inter / uni;
      scored.emplace_back(s, score);
      best = std::max(best, score);
      overlap[s] = 0;
    }
    double cut = focus_threshold * best;
    double sum = 0.0;
    auto& row = spec.rows[t].entries;
    for (const auto& [s, score] : scored)
      if (score > cut) {
        row.emplace_back(s, score);
        sum += score;
      }
    for (auto& [s, w] : row) w /= sum;
  }
  return spec;
}

std::vector<double> apply_transfer(
    const TransferSpec& spec, std::size_t row,
    const std::vector<std::vector<std::int64_t>>& stats,
    const std::vector<double>& prior) {
  if (row >= spec.rows.size())
    throw InputError("apply_transfer: row out of range");
  if (stats.size() != static_cast<std::size_t>(spec.source_dim))
    throw InputError("apply_transfer: stats row count != source dimension");
  for (const auto& r : stats)
    if (r.size() != prior.size())
      throw InputError("apply_transfer: stats columns != prior dimension");
  std::vector<double> out = prior;
  for (const auto& [col, w] : spec.rows[row].entries)
    for (std::size_t m = 0; m < out.size(); m++)
      out[m] += w * static_cast<double>(stats[col][m]);
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

TranslationTree build_translation_tree(const Lexicon& lex,
                                       const Vocabulary& vocab1,
                                       const Vocabulary& vocab2,
                                       double beta_prime, double beta_dprime) {
  if (beta_prime <= 0.0 || beta_dprime <= 0.0)
    throw InputError("build_translation_tree: tree priors must be positive");
  TranslationTree tree;
  tree.beta_prime = beta_prime;
  tree.beta_dprime = beta_dprime;

  const std::int32_t v1 = vocab1.size(), v2 = vocab2.size();
  UnionFind uf(static_cast<std::size_t>(v1) + static_cast<std::size_t>(v2));
  for (const auto& [a, b] : lex.entries) {
    if (a < 0 || a >= v1 || b < 0 || b >= v2)
      throw InputError("build_translation_tree: lexicon entry out of vocabulary");
    uf.unite(a, v1 + b);
  }

  // Components become internal nodes, numbered by first appearance in the
  // entry list so ids are independent of vocabulary sizes.
  std::unordered_map<std::int32_t, std::int32_t> node_of_root;
  for (const auto& [a, b] : lex.entries) {
    std::int32_t root = uf.find(a);
    auto [it, inserted] =
        node_of_root.emplace(root, static_cast<std::int32_t>(tree.nodes.size()));
    if (inserted) tree.nodes.emplace_back();
    tree.nodes[it->second].pair_multiplicity++;
    (void)b;
  }
  std::array<std::vector<std::int32_t>, 2> word_node;
  word_node[0].assign(v1, -1);
  word_node[1].assign(v2, -1);
  for (const auto& [a, b] : lex.entries) {
    std::int32_t node = node_of_root.at(uf.find(a));
    word_node[0][a] = node;
    word_node[1][b] = node;
  }
  for (std::int32_t w = 0; w < v1; w++)
    if (word_node[0][w] >= 0) tree.nodes[word_node[0][w]].words[0].push_back(w);
  for (std::int32_t w = 0; w < v2; w++)
    if (word_node[1][w] >= 0) tree.nodes[word_node[1][w]].words[1].push_back(w);

  for (int lang = 0; lang < 2; lang++) {
    const std::int32_t v = lang == 0 ? v1 : v2;
    for (std::int32_t w = 0; w < v; w++)
      if (word_node[lang][w] < 0) tree.untranslated[lang].push_back(w);
  }

  const std::int32_t node_count = tree.node_count();
  for (int lang = 0; lang < 2; lang++) {
    const std::int32_t v = lang == 0 ? v1 : v2;
    tree.paths[lang].resize(v);
    for (std::int32_t i = 0; i < node_count; i++) {
      const auto& words = tree.nodes[i].words[lang];
      for (std::size_t leaf = 0; leaf < words.size(); leaf++)
        tree.paths[lang][words[leaf]].push_back(
            TreePath{i, i, static_cast<std::int32_t>(leaf)});
    }
    for (std::size_t u = 0; u < tree.untranslated[lang].size(); u++)
      tree.paths[lang][tree.untranslated[lang][u]].push_back(
          TreePath{node_count + static_cast<std::int32_t>(u), -1, -1});

    auto& prior = tree.first_level_prior[lang];
    prior.reserve(tree.cell_count(lang));
    for (std::int32_t i = 0; i < node_count; i++)
      prior.push_back(beta_prime * tree.nodes[i].pair_multiplicity);
    for (std::size_t u = 0; u < tree.untranslated[lang].size(); u++)
      prior.push_back(beta_prime);
    tree.first_level_prior_sum[lang] =
        std::accumulate(prior.begin(), prior.end(), 0.0);
  }
  return tree;
}

std::uint64_t TranslationTree::fingerprint() const {
  std::uint64_t h = fnv1a64_values(&beta_prime, 1);
  h = fnv1a64_values(&beta_dprime, 1, h);
  for (const auto& n : nodes) {
    h = fnv1a64_values(&n.pair_multiplicity, 1, h);
    for (int l = 0; l < 2; l++)
      h = fnv1a64_values(n.words[l].data(), n.words[l].size(), h);
  }
  for (int l = 0; l < 2; l++)
    h = fnv1a64_values(untranslated[l].data(), untranslated[l].size(), h);
  return h;
}

json TranslationTree::debug_dump() const {
  json jnodes = json::array();
  for (const auto& n : nodes)
    jnodes.push_back({{"pair_multiplicity", n.pair_multiplicity},
                      {"words1", n.words[0]},
                      {"words2", n.words[1]}});
  return json{{"nodes", jnodes},
              {"untranslated1", untranslated[0]},
              {"untranslated2", untranslated[1]},
              {"beta_prime", beta_prime},
              {"beta_dprime", beta_dprime},
              {"first_level_prior1", first_level_prior[0]},
              {"first_level_prior2", first_level_prior[1]}};
}

}  // namespace mlt
