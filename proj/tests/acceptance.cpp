// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run a single criterion with --criterion N.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mlt/classify.hpp"
#include "mlt/eval.hpp"
#include "support/oracle.hpp"
#include "support/synth.hpp"

using namespace mlt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion1_formula_identity() {
  Rng rng(20240001);
  double max_diff = 0.0;
  for (int trial = 0; trial < 10000; trial++) {
    const int K = 2 + static_cast<int>(rng.below(19));
    const double alpha = 0.01 + rng.uniform01();
    const int k = static_cast<int>(rng.below(K));
    std::vector<std::int64_t> nx(K), ny(K);
    std::int64_t tx = 0, ty = 0;
    for (int i = 0; i < K; i++) {
      nx[i] = rng.below(100);
      ny[i] = rng.below(100);
      tx += nx[i];
      ty += ny[i];
    }
    const double joint = (nx[k] + ny[k] + alpha) / (tx + ty + K * alpha);
    const double cond = (nx[k] + (ny[k] + alpha)) / (tx + (ty + K * alpha));
    max_diff = std::max(max_diff, std::abs(joint - cond));
  }
  const double hand_joint = (2 + 3 + 0.1) / (5 + 10 + 0.4);
  const double hand_cond = (2 + (3 + 0.1)) / (5 + (10 + 0.4));
  const bool hand_ok = std::abs(hand_joint - 5.1 / 15.4) == 0.0 &&
                       std::abs(hand_joint - hand_cond) <= 1e-12 &&
                       std::abs(hand_joint - 0.331169) < 1e-6;
  return {max_diff <= 1e-12 && hand_ok,
          "10000 fixtures, max|joint-cond|=" + fmt("%.2e", max_diff) +
              ", hand fixture 5.1/15.4=" + fmt("%.6f", hand_joint)};
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion2_exact_posterior() {
  // 2 document pairs, 12 tokens total, K=2, V=3 per language
  PairedCorpus corpus;
  auto doc = [](const std::string& id, const std::string& lang,
                std::vector<std::int32_t> toks) {
    Document d;
    d.id = id;
    d.lang = lang;
    d.tokens = std::move(toks);
    return d;
  };
  corpus.side1.push_back(doc("a0", "en", {0, 1, 2}));
  corpus.side1.push_back(doc("a1", "en", {2, 2, 0}));
  corpus.side2.push_back(doc("b0", "xx", {0, 1, 1}));
  corpus.side2.push_back(doc("b1", "xx", {1, 2, 0}));
  corpus.pairs = {{0, 0}, {1, 1}};
  Vocabulary v1 = synth::make_vocab("en", "e", 3);
  Vocabulary v2 = synth::make_vocab("xx", "x", 3);
  Hyperparameters hyper;
  hyper.topics = 2;
  Lexicon lexicon;

  double worst = 0.0;
  std::string detail;
  for (ModelKind kind : {ModelKind::lda, ModelKind::doclink}) {
    auto problem = oracle::make_problem(corpus, 3, 3,
                                        kind == ModelKind::doclink, 2,
                                        hyper.alpha, hyper.beta);
    auto exact = oracle::exact_marginals(problem);
    auto plan = build_plan(kind, corpus, lexicon, v1, v2, hyper);
    SamplerState state(kind, corpus, v1, v2, plan, hyper, 97531);
    auto emp = oracle::gibbs_marginals(state, problem, 1000, 50000);
    double linf = 0.0;
    for (std::size_t i = 0; i < exact.size(); i++)
      for (int k = 0; k < 2; k++)
        linf = std::max(linf, std::abs(exact[i][k] - emp[i][k]));
    worst = std::max(worst, linf);
    detail += to_string(kind) + " Linf=" + fmt("%.4f", linf) + " ";
  }
  return {worst <= 0.02, detail + "(bound 0.02, 50000 post-burn-in sweeps)"};
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion3_reduction_lattice() {
  Rng rng(333);
  double worst = 0.0;
  int ranking_checked = 0;
  bool ranking_ok = true;

  for (int trial = 0; trial < 12; trial++) {
    auto fuzz = synth::make_fuzz(rng);
    Hyperparameters hyper;
    hyper.topics = 4;
    Lexicon empty_lexicon;

    auto lda_plan = build_plan(ModelKind::lda, fuzz.corpus, empty_lexicon,
                               fuzz.vocab1, fuzz.vocab2, hyper);
    SamplerState seed_state(ModelKind::lda, fuzz.corpus, fuzz.vocab1,
                            fuzz.vocab2, lda_plan, hyper, 1000 + trial);
    for (int s = 0; s < 2; s++) seed_state.sweep();
    auto assign = seed_state.assignments();
    auto restore = [&](ModelKind kind, const TransferPlan& plan,
                       const Hyperparameters& h) {
      return SamplerState(kind, fuzz.corpus, fuzz.vocab1, fuzz.vocab2, plan, h,
                          1, assign);
    };

    // DocLink with no pairs == LDA
    PairedCorpus unlinked = fuzz.corpus;
    unlinked.pairs.clear();
    auto dl_zero_plan = build_plan(ModelKind::doclink, unlinked, empty_lexicon,
                                   fuzz.vocab1, fuzz.vocab2, hyper);
    SamplerState lda_state(ModelKind::lda, unlinked, fuzz.vocab1, fuzz.vocab2,
                           lda_plan, hyper, 1, assign);
    SamplerState dl_zero(ModelKind::doclink, unlinked, fuzz.vocab1, fuzz.vocab2,
                         dl_zero_plan, hyper, 1, assign);
    // SoftLink with hard rows == DocLink (on the linked corpus)
    auto dl_plan = build_plan(ModelKind::doclink, fuzz.corpus, empty_lexicon,
                              fuzz.vocab1, fuzz.vocab2, hyper);
    TransferPlan soft_hard;
    soft_hard.kind = ModelKind::softlink;
    soft_hard.to_side1 = build_doclink_delta(fuzz.corpus, 1, 4, hyper.alpha);
    soft_hard.to_side2 = build_doclink_delta(fuzz.corpus, 2, 4, hyper.alpha);
    auto dl_state = restore(ModelKind::doclink, dl_plan, hyper);
    auto soft_state = restore(ModelKind::softlink, soft_hard, hyper);
    // VocLink with an empty tree == LDA at beta_prime
    Hyperparameters hv = hyper;
    hv.beta_prime = 0.013;
    auto voc_plan = build_plan(ModelKind::voclink, fuzz.corpus, empty_lexicon,
                               fuzz.vocab1, fuzz.vocab2, hv);
    Hyperparameters hl = hyper;
    hl.beta = 0.013;
    auto voc_state = restore(ModelKind::voclink, voc_plan, hv);
    auto lda_bp = restore(ModelKind::lda, lda_plan, hl);
    // C-BiLDA at chi=1e6 ranks like DocLink
    Hyperparameters hc = hyper;
    hc.chi = 1e6;
    auto cb_plan = build_plan(ModelKind::cbilda, fuzz.corpus, empty_lexicon,
                              fuzz.vocab1, fuzz.vocab2, hc);
    auto cb_state = restore(ModelKind::cbilda, cb_plan, hc);

    for (int side = 0; side < 2; side++)
      for (std::int32_t d = 0; d < lda_state.doc_count(side); d++)
        for (std::int64_t pos = 0; pos < lda_state.doc_length(side, d); pos++) {
          auto c_lda = lda_state.conditional(side, d, pos);
          auto c_dl0 = dl_zero.conditional(side, d, pos);
          auto c_dl = dl_state.conditional(side, d, pos);
          auto c_soft = soft_state.conditional(side, d, pos);
          auto c_voc = voc_state.conditional(side, d, pos);
          auto c_ldabp = lda_bp.conditional(side, d, pos);
          for (int k = 0; k < 4; k++) {
            worst = std::max(worst, std::abs(c_lda[k] - c_dl0[k]));
            worst = std::max(worst, std::abs(c_dl[k] - c_soft[k]));
            worst = std::max(worst, std::abs(c_voc[k] - c_ldabp[k]));
          }
          if (ranking_checked < 1000) {
            auto c_cb = cb_state.conditional(side, d, pos);
            // skip near-ties: chi=1e6 perturbs ratios by O(n/chi)
            std::vector<double> sorted = c_dl;
            std::sort(sorted.begin(), sorted.end());
            double min_gap = 1.0;
            for (int k = 1; k < 4; k++)
              if (sorted[k] != sorted[k - 1])
                min_gap = std::min(
                    min_gap, (sorted[k] - sorted[k - 1]) / sorted[k]);
            if (min_gap < 1e-4) continue;
            auto rank = [](const std::vector<double>& p) {
              std::vector<int> idx(p.size());
              std::iota(idx.begin(), idx.end(), 0);
              std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                if (p[a] != p[b]) return p[a] > p[b];
                return a < b;
              });
              return idx;
            };
            if (rank(c_cb) != rank(c_dl)) ranking_ok = false;
            ranking_checked++;
          }
        }
  }
  return {worst <= 1e-12 && ranking_ok && ranking_checked >= 1000,
          "max conditional gap=" + fmt("%.2e", worst) + ", cbilda ranking on " +
              std::to_string(ranking_checked) + " tokens " +
              (ranking_ok ? "matched" : "MISMATCHED")};
}

// ------------------------------------------------------- shared synthetic run

synth::PlantedCorpus planted_corpus() {
  return synth::make_planted({.topics = 4,
                              .vocab = 200,
                              .pairs = 500,
                              .doc_tokens = 50,
                              .theta_alpha = 0.3,
                              .noise = 0.01,
                              .seed = 424242});
}

TrainedModel train_once(ModelKind kind, const PairedCorpus& corpus,
                        const Vocabulary& v1, const Vocabulary& v2,
                        const Lexicon& lexicon, int sweeps, int topics,
                        std::uint64_t seed, Assignments* final_assign = nullptr) {
  Hyperparameters hyper;
  hyper.topics = topics;
  hyper.train_sweeps = sweeps;
  hyper.chains = 1;
  hyper.seed = seed;
  auto plan = build_plan(kind, corpus, lexicon, v1, v2, hyper);
  auto chains = train(kind, corpus, v1, v2, plan, hyper);
  if (final_assign) *final_assign = chains[0].final_assignments;
  return std::move(chains[0].model);
}

std::vector<std::vector<std::string>> planted_top10(
    const synth::PlantedCorpus& planted, int lang) {
  const int K = planted.config.topics;
  const int V = planted.config.vocab;
  const auto& vocab = lang == 0 ? planted.vocab1 : planted.vocab2;
  std::vector<std::vector<std::string>> tops(K);
  for (int k = 0; k < K; k++) {
    std::vector<int> order(V);
    std::iota(order.begin(), order.end(), 0);
    const auto& phi = planted.phi[lang];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (phi[k * V + a] != phi[k * V + b]) return phi[k * V + a] > phi[k * V + b];
      return a < b;
    });
    for (int i = 0; i < 10; i++) tops[k].push_back(vocab.types[order[i]]);
  }
  return tops;
}

double greedy_top10_overlap(const synth::PlantedCorpus& planted,
                            const TrainedModel& model) {
  const int K = planted.config.topics;
  std::vector<std::vector<std::string>> truth[2] = {planted_top10(planted, 0),
                                                    planted_top10(planted, 1)};
  std::vector<TopicWordSet> learned(K);
  for (int k = 0; k < K; k++) learned[k] = top_words(model, k, 10);
  auto overlap = [&](int lk, int pk) {
    double total = 0.0;
    for (int lang = 0; lang < 2; lang++) {
      std::set<std::string> a(learned[lk].words[lang].begin(),
                              learned[lk].words[lang].end());
      int inter = 0;
      for (const auto& w : truth[lang][pk]) inter += a.count(w);
      total += inter / 10.0;
    }
    return total / 2.0;
  };
  std::vector<bool> used_l(K, false), used_p(K, false);
  double sum = 0.0;
  for (int round = 0; round < K; round++) {
    double best = -1.0;
    int bl = -1, bp = -1;
    for (int lk = 0; lk < K; lk++)
      for (int pk = 0; pk < K; pk++)
        if (!used_l[lk] && !used_p[pk] && overlap(lk, pk) > best) {
          best = overlap(lk, pk);
          bl = lk;
          bp = pk;
        }
    used_l[bl] = used_p[bp] = true;
    sum += best;
  }
  return sum / K;
}

double mean_cnpmi(const TrainedModel& model, const ReferenceCorpus& ref,
                  int shift) {
  const int K = model.topics();
  double sum = 0.0;
  for (int k = 0; k < K; k++) {
    auto wa = top_words(model, k, 10);
    auto wb = top_words(model, (k + shift) % K, 10);
    TopicWordSet cross{{wa.words[0], wb.words[1]}};
    sum += cnpmi(cross, ref).value;
  }
  return sum / K;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4_synthetic_recovery(int seeds, int sweeps) {
  auto planted = planted_corpus();
  auto ref = ReferenceCorpus::from_pairs(synth::reference_pairs(planted));
  Lexicon lexicon;
  double overlap_sum = 0.0;
  int cnpmi_wins = 0;
  for (int s = 0; s < seeds; s++) {
    auto model = train_once(ModelKind::doclink, planted.corpus, planted.vocab1,
                            planted.vocab2, lexicon, sweeps, 4, 7000 + s);
    overlap_sum += greedy_top10_overlap(planted, model);
    const double trained = mean_cnpmi(model, ref, 0);
    const double shuffled = mean_cnpmi(model, ref, 1);
    if (trained > shuffled) cnpmi_wins++;
  }
  const double mean_overlap = overlap_sum / seeds;
  const bool pass =
      mean_overlap >= 0.6 && cnpmi_wins >= static_cast<int>(0.95 * seeds);
  return {pass, "mean top-10 overlap=" + fmt("%.3f", mean_overlap) +
                    " (>=0.6), cnpmi trained>shuffled in " +
                    std::to_string(cnpmi_wins) + "/" + std::to_string(seeds)};
}

// ---------------------------------------------------------------- criterion 5

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) j++;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t t = i; t <= j; t++) r[order[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  auto rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); i++) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= rx.size();
  my /= ry.size();
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); i++) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

Outcome criterion5_trend(int seeds, int sweeps) {
  auto planted = planted_corpus();
  auto ref = ReferenceCorpus::from_pairs(synth::reference_pairs(planted));
  auto lexicon = synth::identity_lexicon(planted.config.vocab);
  const std::vector<double> props = {0.0, 0.05, 0.2, 0.8, 1.0};

  std::vector<double> doclink_means, softlink_means;
  for (std::size_t pi = 0; pi < props.size(); pi++) {
    double dsum = 0.0, ssum = 0.0;
    for (int s = 0; s < seeds; s++) {
      auto corpus = subsample_links(planted.corpus, props[pi],
                                    derive_seed(31337, pi * 100 + s));
      auto dm = train_once(ModelKind::doclink, corpus, planted.vocab1,
                           planted.vocab2, lexicon, sweeps, 4,
                           9000 + pi * 100 + s);
      dsum += mean_cnpmi(dm, ref, 0);
      auto sm = train_once(ModelKind::softlink, corpus, planted.vocab1,
                           planted.vocab2, lexicon, sweeps, 4,
                           5000 + pi * 100 + s);
      ssum += mean_cnpmi(sm, ref, 0);
    }
    doclink_means.push_back(dsum / seeds);
    softlink_means.push_back(ssum / seeds);
  }
  const double rho = spearman(props, doclink_means);
  auto range = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) -
           *std::min_element(v.begin(), v.end());
  };
  const double drange = range(doclink_means);
  const double srange = range(softlink_means);
  std::string detail = "doclink cnpmi by proportion:";
  for (double m : doclink_means) detail += " " + fmt("%.3f", m);
  detail += "; softlink:";
  for (double m : softlink_means) detail += " " + fmt("%.3f", m);
  detail += "; spearman=" + fmt("%.3f", rho) +
            ", ranges soft/doc=" + fmt("%.3f", srange) + "/" +
            fmt("%.3f", drange);
  return {rho >= 0.8 && srange <= 0.5 * drange, detail};
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6_cnpmi_units() {
  using Pairs = std::vector<std::array<std::vector<std::string>, 2>>;
  Pairs perfect = {{std::vector<std::string>{"a"}, {"p"}},
                   {std::vector<std::string>{"a"}, {"p"}},
                   {std::vector<std::string>{"b"}, {"q"}},
                   {std::vector<std::string>{"b"}, {"q"}}};
  auto ref = ReferenceCorpus::from_pairs(perfect);
  bool ok = npmi_pair("a", "p", ref) == 1.0;
  ok = ok && npmi_pair("a", "q", ref) == -1.0;

  Pairs ind = {{std::vector<std::string>{"a"}, {"p"}},
               {std::vector<std::string>{"a"}, {"q"}},
               {std::vector<std::string>{"b"}, {"p"}},
               {std::vector<std::string>{"b"}, {"q"}}};
  ok = ok && npmi_pair("a", "p", ReferenceCorpus::from_pairs(ind)) == 0.0;

  // all four crosslingual pairs perfectly co-occurring -> cnpmi exactly 1
  Pairs allperfect = {{std::vector<std::string>{"a", "b"}, {"p", "q"}},
                      {std::vector<std::string>{"a", "b"}, {"p", "q"}},
                      {std::vector<std::string>{"c"}, {"r"}},
                      {std::vector<std::string>{"c"}, {"r"}}};
  TopicWordSet both{{std::vector<std::string>{"a", "b"},
                     std::vector<std::string>{"p", "q"}}};
  ok = ok && cnpmi(both, ReferenceCorpus::from_pairs(allperfect)).value == 1.0;
  Pairs never = {{std::vector<std::string>{"a", "b"}, {"p", "q"}},
                 {std::vector<std::string>{"c", "d"}, {"r", "s"}}};
  TopicWordSet crossed{{std::vector<std::string>{"a", "b"},
                        std::vector<std::string>{"r", "s"}}};
  ok = ok && cnpmi(crossed, ReferenceCorpus::from_pairs(never)).value == -1.0;

  // mixed: (a,p) perfect, other three pairs exactly independent -> 0.25
  Pairs mixed(8);
  for (int i : {0, 1}) mixed[i][0].push_back("a");
  for (int i : {1, 2, 4, 7}) mixed[i][0].push_back("b");
  for (int i : {0, 1}) mixed[i][1].push_back("p");
  for (int i : {1, 4, 5, 6}) mixed[i][1].push_back("q");
  auto mref = ReferenceCorpus::from_pairs(mixed);
  ok = ok && cnpmi(both, mref).value == 0.25;
  return {ok, "perfect=1, never=-1, independence=0, mixed=0.25, all exact"};
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7_strength(int seeds, int sweeps) {
  bool ok = strength_ratio({0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25}) == 1.0 &&
            strength_ratio({0.5, 0.5}, {0.5, 0.5}) == 1.0;
  const double r = strength_ratio({0.9, 0.1}, {0.5, 0.5});
  const double expect = 1.0 / (0.5 / (std::sqrt(0.5) * std::sqrt(0.82)));
  ok = ok && std::abs(r - expect) <= 1e-12 && std::abs(r - 1.2806248) <= 1e-6;
  // uniform word vote leaves P = P_doc, numerator cosine exactly 1
  ok = ok && r >= 1.0;

  auto planted = planted_corpus();
  Lexicon lexicon;
  Hyperparameters hyper;
  hyper.topics = 4;
  hyper.train_sweeps = sweeps;
  hyper.chains = 1;
  auto plan = build_plan(ModelKind::doclink, planted.corpus, lexicon,
                         planted.vocab1, planted.vocab2, hyper);
  int wins = 0;
  double mean_sum = 0.0;
  for (int s = 0; s < seeds; s++) {
    SamplerState state(ModelKind::doclink, planted.corpus, planted.vocab1,
                       planted.vocab2, plan, hyper, 88000 + s);
    for (int i = 0; i < sweeps; i++) state.sweep();
    auto rep = transfer_strength(state);
    mean_sum += rep.mean;
    if (rep.mean > 1.0) wins++;
  }
  ok = ok && wins >= static_cast<int>(0.95 * seeds);
  return {ok, "fixture r=" + fmt("%.7f", r) + ", doclink mean r>1 in " +
                  std::to_string(wins) + "/" + std::to_string(seeds) +
                  " seeds (mean of means " + fmt("%.3f", mean_sum / seeds) +
                  ")"};
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8_classification(int sweeps) {
  // exact hand fixtures first
  using Rows = std::vector<std::vector<std::int32_t>>;
  Rows pred = {{0, 1}, {0}};
  Rows gold = {{0, 2}, {0}};
  bool ok = std::abs(micro_f1(pred, gold) - 2.0 / 3.0) <= 1e-12;
  Rows perfect = {{0}, {1, 2}};
  ok = ok && micro_f1(perfect, perfect) == 1.0;

  auto planted = planted_corpus();
  Lexicon lexicon;
  auto model = train_once(ModelKind::doclink, planted.corpus, planted.vocab1,
                          planted.vocab2, lexicon, sweeps, 4, 60601);
  auto test1 = synth::make_planted_heldout(planted, 0, 300, 111);
  auto test2 = synth::make_planted_heldout(planted, 1, 300, 222);
  auto inf1 = infer(model, 0, test1, 501);
  auto inf2 = infer(model, 1, test2, 502);
  std::vector<std::string> universe = {"label0", "label1", "label2", "label3"};
  auto f1set = export_features(inf1.theta, test1, inf1.token_counts, universe);
  auto f2set = export_features(inf2.theta, test2, inf2.token_counts, universe);
  auto clf = train_classifier(f1set, 5, {0.01, 0.1, 1, 10}, 77);
  auto predicted = predict(clf, f2set.rows);
  const double f1 = micro_f1(predicted, f2set.labels);
  ok = ok && f1 >= 0.8;
  return {ok, "cross-language micro-F1=" + fmt("%.3f", f1) +
                  " (>=0.8), hand fixtures exact"};
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion9_count_invariants() {
  Rng rng(990);
  int corpora = 0;
  try {
    for (int trial = 0; trial < 100; trial++) {
      auto fuzz = synth::make_fuzz(rng);
      Hyperparameters hyper;
      hyper.topics = 2 + static_cast<int>(rng.below(4));
      for (ModelKind kind :
           {ModelKind::lda, ModelKind::doclink, ModelKind::cbilda,
            ModelKind::softlink, ModelKind::voclink}) {
        auto plan = build_plan(kind, fuzz.corpus, fuzz.lexicon, fuzz.vocab1,
                               fuzz.vocab2, hyper);
        SamplerState state(kind, fuzz.corpus, fuzz.vocab1, fuzz.vocab2, plan,
                           hyper, 4000 + trial);
        state.check_invariants();
        for (int s = 0; s < 2; s++) {
          state.sweep();
          state.check_invariants();
        }
      }
      corpora++;
    }
  } catch (const std::exception& e) {
    return {false, std::string("invariant violated: ") + e.what() + " after " +
                       std::to_string(corpora) + " corpora"};
  }
  return {true, "100 fuzz corpora x 5 models x 2 sweeps, all invariants held"};
}

// --------------------------------------------------------------- criterion 10

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MLT_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10_determinism() {
  const fs::path dir = fs::temp_directory_path() / "mlt_acceptance_c10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto planted = synth::make_planted(
      {.topics = 2, .vocab = 30, .pairs = 20, .doc_tokens = 15, .seed = 5150});
  std::vector<RawDocument> raw1, raw2, ref;
  for (std::size_t i = 0; i < planted.corpus.side1.size(); i++) {
    RawDocument r;
    r.id = planted.corpus.side1[i].id;
    r.lang = "en";
    for (auto t : planted.corpus.side1[i].tokens)
      r.tokens.push_back(planted.vocab1.types[t]);
    raw1.push_back(r);
    RawDocument s;
    s.id = planted.corpus.side2[i].id;
    s.lang = "xx";
    for (auto t : planted.corpus.side2[i].tokens)
      s.tokens.push_back(planted.vocab2.types[t]);
    s.link = r.id;
    raw2.push_back(s);
  }
  ref = raw1;
  for (const auto& r : raw2) ref.push_back(r);
  write_jsonl((dir / "s1.jsonl").string(), raw1);
  write_jsonl((dir / "s2.jsonl").string(), raw2);
  write_jsonl((dir / "ref.jsonl").string(), ref);

  const std::string base = " --side1 " + (dir / "s1.jsonl").string() +
                           " --side2 " + (dir / "s2.jsonl").string() +
                           " --reference " + (dir / "ref.jsonl").string() +
                           " --model doclink --topics 2 --chains 2"
                           " --train-sweeps 30 --freq-cutoff 0 --seed 321";

  // two identical train runs into the same path
  if (run_cli("train" + base + " --out " + (dir / "t").string()) != 0)
    return {false, "train run 1 failed"};
  std::string m0 = slurp(dir / "t" / "model_chain0.json");
  std::string m1 = slurp(dir / "t" / "model_chain1.json");
  std::string rep = slurp(dir / "t" / "train_report.json");
  std::string st0 = slurp(dir / "t" / "state_chain0.json");
  fs::remove_all(dir / "t");
  if (run_cli("train" + base + " --out " + (dir / "t").string()) != 0)
    return {false, "train run 2 failed"};
  bool ok = m0 == slurp(dir / "t" / "model_chain0.json") &&
            m1 == slurp(dir / "t" / "model_chain1.json") &&
            rep == slurp(dir / "t" / "train_report.json") &&
            st0 == slurp(dir / "t" / "state_chain0.json");
  if (!ok) return {false, "train outputs differ between identical runs"};

  // sweep under --jobs 4, twice, plus --jobs 1 for scheduling independence
  const std::string sweep_args = "sweep" + base +
                                 " --sweep-values 0,0.5,1 --train-sweeps 20";
  if (run_cli(sweep_args + " --jobs 4 --out " + (dir / "w4").string()) != 0)
    return {false, "sweep --jobs 4 failed"};
  std::string tsv4 = slurp(dir / "w4" / "sweep_summary.tsv");
  std::string cell_model =
      slurp(dir / "w4" / "cell_000_doclink" / "model_chain0.json");
  fs::remove_all(dir / "w4");
  if (run_cli(sweep_args + " --jobs 4 --out " + (dir / "w4").string()) != 0)
    return {false, "sweep --jobs 4 rerun failed"};
  ok = tsv4 == slurp(dir / "w4" / "sweep_summary.tsv") &&
       cell_model ==
           slurp(dir / "w4" / "cell_000_doclink" / "model_chain0.json");
  if (!ok) return {false, "sweep outputs differ between identical runs"};
  if (run_cli(sweep_args + " --jobs 1 --out " + (dir / "w1").string()) != 0)
    return {false, "sweep --jobs 1 failed"};
  ok = tsv4 == slurp(dir / "w1" / "sweep_summary.tsv");
  if (!ok) return {false, "sweep summary differs between --jobs 1 and 4"};
  fs::remove_all(dir);
  return {true,
          "byte-identical models, states, reports, and sweep TSV across "
          "reruns and --jobs {1,4}"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

Outcome run1() { return criterion1_formula_identity(); }
Outcome run2() { return criterion2_exact_posterior(); }
Outcome run3() { return criterion3_reduction_lattice(); }
Outcome run4() { return criterion4_synthetic_recovery(20, 1000); }
Outcome run5() { return criterion5_trend(5, 1000); }
Outcome run6() { return criterion6_cnpmi_units(); }
Outcome run7() { return criterion7_strength(20, 200); }
Outcome run8() { return criterion8_classification(500); }
Outcome run9() { return criterion9_count_invariants(); }
Outcome run10() { return criterion10_determinism(); }

const Criterion kCriteria[] = {
    {1, "formula-identity", 1.0, run1},
    {2, "exact-posterior-oracle", 120.0, run2},
    {3, "reduction-lattice", 10.0, run3},
    {4, "synthetic-recovery", 300.0, run4},
    {5, "trend-reproduction", 900.0, run5},
    {6, "cnpmi-unit-suite", 1.0, run6},
    {7, "transfer-strength", 120.0, run7},
    {8, "classification-pipeline", 120.0, run8},
    {9, "count-invariants", 60.0, run9},
    {10, "determinism", 120.0, run10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; i++)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);

  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_budget = elapsed < c.budget_seconds;
    const bool pass = out.pass && in_budget;
    std::printf("[%s] criterion %d %s: %s (%.1fs, budget %.0fs)\n",
                pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                elapsed, c.budget_seconds);
    std::fflush(stdout);
    if (!pass) failures++;
  }
  return failures == 0 ? 0 : 1;
}
