#include "mlt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace mlt {

ReferenceCorpus ReferenceCorpus::from_pairs(
    const std::vector<std::array<std::vector<std::string>, 2>>& pairs) {
  ReferenceCorpus ref;
  ref.size = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); i++)
    for (int lang = 0; lang < 2; lang++) {
      std::set<std::string> uniq(pairs[i][lang].begin(), pairs[i][lang].end());
      for (const auto& w : uniq)
        ref.postings[lang][w].push_back(static_cast<std::int32_t>(i));
    }
  return ref;
}

ReferenceCorpus ReferenceCorpus::from_documents(
    const std::vector<RawDocument>& docs, const std::string& lang1,
    const std::string& lang2) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < docs.size(); i++) by_id.emplace(docs[i].id, i);
  std::vector<std::array<std::vector<std::string>, 2>> pairs;
  std::unordered_set<std::string> used;
  for (const auto& d : docs) {
    if (d.link.empty()) continue;
    auto it = by_id.find(d.link);
    if (it == by_id.end()) continue;
    const auto& other = docs[it->second];
    const RawDocument* first = nullptr;
    const RawDocument* second = nullptr;
    if (d.lang == lang1 && other.lang == lang2) {
      first = &d;
      second = &other;
    } else if (d.lang == lang2 && other.lang == lang1) {
      first = &other;
      second = &d;
    } else {
      continue;
    }
    if (used.count(first->id) || used.count(second->id)) continue;
    used.insert(first->id);
    used.insert(second->id);
    pairs.push_back({first->tokens, second->tokens});
  }
  if (pairs.empty())
    throw InputError("reference corpus: no linked (" + lang1 + ", " + lang2 +
                     ") document pairs found");
  return from_pairs(pairs);
}

TopicWordSet top_words(const TrainedModel& model, int topic, int cardinality) {
  if (cardinality < 1) throw InputError("top_words: cardinality must be >= 1");
  TopicWordSet out;
  for (int s = 0; s < 2; s++) {
    const std::int32_t v = model.vocab_size(s);
    std::vector<std::int32_t> order(v);
    for (std::int32_t w = 0; w < v; w++) order[w] = w;
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      const double pa = model.phi_at(s, topic, a);
      const double pb = model.phi_at(s, topic, b);
      if (pa != pb) return pa > pb;
      return a < b;
    });
    const std::int32_t n = std::min<std::int32_t>(cardinality, v);
    for (std::int32_t i = 0; i < n; i++)
      out.words[s].push_back(model.vocab_types[s][order[i]]);
  }
  return out;
}

namespace {

std::size_t posting_count(const ReferenceCorpus& ref, int lang,
                          const std::string& w) {
  auto it = ref.postings[lang].find(w);
  return it == ref.postings[lang].end() ? 0 : it->second.size();
}

std::size_t co_count(const ReferenceCorpus& ref, const std::string& w1,
                     const std::string& w2) {
  auto i1 = ref.postings[0].find(w1);
  auto i2 = ref.postings[1].find(w2);
  if (i1 == ref.postings[0].end() || i2 == ref.postings[1].end()) return 0;
  const auto& a = i1->second;
  const auto& b = i2->second;
  std::size_t n = 0;
  auto pa = a.begin();
  auto pb = b.begin();
  while (pa != a.end() && pb != b.end()) {
    if (*pa < *pb)
      ++pa;
    else if (*pb < *pa)
      ++pb;
    else {
      n++;
      ++pa;
      ++pb;
    }
  }
  return n;
}

}  // namespace

double npmi_pair(const std::string& w1, const std::string& w2,
                 const ReferenceCorpus& ref) {
  if (ref.size == 0) throw InputError("npmi_pair: empty reference corpus");
  const std::size_t ci = posting_count(ref, 0, w1);
  const std::size_t cj = posting_count(ref, 1, w2);
  if (ci == 0 || cj == 0) return 0.0;  // uncovered word: uninformative
  const std::size_t co = co_count(ref, w1, w2);
  if (co == 0) return -1.0;
  // integer identities keep the boundary fixtures exact
  if (co * ref.size == ci * cj) return 0.0;    // P_ij == P_i * P_j
  if (co == ci && co == cj) return 1.0;        // perfect co-occurrence, P < 1
  const double r = static_cast<double>(ref.size);
  const double pij = static_cast<double>(co) / r;
  const double pi = static_cast<double>(ci) / r;
  const double pj = static_cast<double>(cj) / r;
  return -std::log(pij / (pi * pj)) / std::log(pij);
}

CnpmiResult cnpmi(const TopicWordSet& topic, const ReferenceCorpus& ref) {
  if (topic.words[0].empty() || topic.words[1].empty())
    throw InputError("cnpmi: topic needs words in both languages");
  CnpmiResult res;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& w1 : topic.words[0])
    for (const auto& w2 : topic.words[1]) {
      sum += npmi_pair(w1, w2, ref);
      n++;
    }
  res.value = sum / static_cast<double>(n);
  for (int lang = 0; lang < 2; lang++)
    for (const auto& w : topic.words[lang]) {
      res.total_words++;
      if (posting_count(ref, lang, w) > 0) res.covered_words++;
    }
  return res;
}

namespace {

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  std::size_t inter = 0;
  for (const auto& w : sa) inter += sb.count(w);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::vector<AlignedPair> align_topics(const TrainedModel& a,
                                      const TrainedModel& b, int cardinality,
                                      double validity_fraction) {
  if (a.topics() != b.topics())
    throw InputError("align_topics: models have different topic counts");
  if (a.vocab_hash != b.vocab_hash)
    throw InputError("align_topics: models have different vocabularies");
  const int K = a.topics();
  std::vector<TopicWordSet> tops_a(K), tops_b(K);
  for (int k = 0; k < K; k++) {
    tops_a[k] = top_words(a, k, cardinality);
    tops_b[k] = top_words(b, k, cardinality);
  }
  std::vector<double> score(static_cast<std::size_t>(K) * K, 0.0);
  double max_score = 0.0;
  for (int k = 0; k < K; k++)
    for (int k2 = 0; k2 < K; k2++) {
      const double m = 0.5 * (jaccard(tops_a[k].words[0], tops_b[k2].words[0]) +
                              jaccard(tops_a[k].words[1], tops_b[k2].words[1]));
      score[static_cast<std::size_t>(k) * K + k2] = m;
      max_score = std::max(max_score, m);
    }
  const double cut = validity_fraction * max_score;
  std::vector<AlignedPair> out;
  for (int k = 0; k < K; k++) {
    int best = -1;
    double best_score = 0.0;
    for (int k2 = 0; k2 < K; k2++) {
      const double m = score[static_cast<std::size_t>(k) * K + k2];
      if (m > cut && m > best_score) {
        best = k2;
        best_score = m;
      }
    }
    if (best >= 0) out.push_back({k, best, best_score});
  }
  return out;
}

DocFrequencyReport doc_frequency_report(const TopicWordSet& first,
                                        const TopicWordSet& second,
                                        const PairedCorpus& corpus,
                                        const Vocabulary& vocab1,
                                        const Vocabulary& vocab2) {
  DocFrequencyReport rep;
  std::array<const Vocabulary*, 2> vocabs = {&vocab1, &vocab2};
  std::array<const std::vector<Document>*, 2> sides = {&corpus.side1,
                                                       &corpus.side2};
  double sum_shared = 0.0, sum_first = 0.0, sum_second = 0.0;
  for (int lang = 0; lang < 2; lang++) {
    const auto& docs = *sides[lang];
    auto doc_frequency = [&](const std::string& word) {
      const std::int32_t id = vocabs[lang]->lookup(word);
      std::size_t n = 0;
      if (id >= 0)
        for (const auto& d : docs)
          if (std::find(d.tokens.begin(), d.tokens.end(), id) != d.tokens.end())
            n++;
      return docs.empty() ? 0.0
                          : static_cast<double>(n) /
                                static_cast<double>(docs.size());
    };
    std::set<std::string> in_first(first.words[lang].begin(),
                                   first.words[lang].end());
    std::set<std::string> in_second(second.words[lang].begin(),
                                    second.words[lang].end());
    for (const auto& w : in_first) {
      if (in_second.count(w)) {
        sum_shared += doc_frequency(w);
        rep.shared_count++;
      } else {
        sum_first += doc_frequency(w);
        rep.only_first_count++;
      }
    }
    for (const auto& w : in_second)
      if (!in_first.count(w)) {
        sum_second += doc_frequency(w);
        rep.only_second_count++;
      }
  }
  if (rep.shared_count > 0)
    rep.shared = sum_shared / static_cast<double>(rep.shared_count);
  if (rep.only_first_count > 0)
    rep.only_first = sum_first / static_cast<double>(rep.only_first_count);
  if (rep.only_second_count > 0)
    rep.only_second = sum_second / static_cast<double>(rep.only_second_count);
  return rep;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); i++) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double strength_ratio(const std::vector<double>& doc_vote,
                      const std::vector<double>& word_vote) {
  std::vector<double> combined(doc_vote.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < doc_vote.size(); i++) {
    combined[i] = doc_vote[i] * word_vote[i];
    sum += combined[i];
  }
  for (double& v : combined) v /= sum;
  return cosine(doc_vote, combined) / cosine(word_vote, combined);
}

StrengthReport transfer_strength(SamplerState& state) {
  std::vector<double> ratios;
  for (int s = 0; s < 2; s++)
    for (std::int32_t d = 0; d < state.doc_count(s); d++)
      for (std::int64_t pos = 0; pos < state.doc_length(s, d); pos++) {
        auto tv = state.token_votes(s, d, pos);
        ratios.push_back(cosine(tv.doc, tv.combined) /
                         cosine(tv.word, tv.combined));
      }
  StrengthReport rep;
  rep.tokens = ratios.size();
  if (ratios.empty()) return rep;
  double sum = 0.0;
  for (double r : ratios) sum += r;
  rep.mean = sum / static_cast<double>(ratios.size());
  std::sort(ratios.begin(), ratios.end());
  for (int q = 0; q <= 10; q++) {
    const double pos = static_cast<double>(ratios.size() - 1) * q / 10.0;
    rep.deciles[q] = ratios[static_cast<std::size_t>(std::lround(pos))];
  }
  return rep;
}

}  // namespace mlt
