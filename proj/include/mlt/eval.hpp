#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlt/corpus.hpp"
#include "mlt/sampler.hpp"

namespace mlt {

// Parallel reference pairs reduced to per-document type sets, with postings
// (word -> sorted pair ids) per language for co-occurrence counting.
struct ReferenceCorpus {
  std::size_t size = 0;  // |R|
  std::array<std::unordered_map<std::string, std::vector<std::int32_t>>, 2>
      postings;

  static ReferenceCorpus from_documents(const std::vector<RawDocument>& docs,
                                        const std::string& lang1,
                                        const std::string& lang2);
  static ReferenceCorpus from_pairs(
      const std::vector<std::array<std::vector<std::string>, 2>>& pairs);
};

struct TopicWordSet {
  std::array<std::vector<std::string>, 2> words;  // top C per language
};

// Top C words of one topic by phi, ties broken by word index ascending.
TopicWordSet top_words(const TrainedModel& model, int topic, int cardinality);

// NPMI of a crosslingual word pair against the reference corpus, in [-1, 1].
// Boundary conventions: no co-occurrence -> -1; a word missing from the
// reference contributes 0; P_ij == P_i * P_j -> 0; P_ij == P_i == P_j < 1 -> 1.
double npmi_pair(const std::string& w1, const std::string& w2,
                 const ReferenceCorpus& ref);

struct CnpmiResult {
  double value = 0.0;
  std::size_t covered_words = 0;  // topic words present in the reference
  std::size_t total_words = 0;
};

CnpmiResult cnpmi(const TopicWordSet& topic, const ReferenceCorpus& ref);

struct AlignedPair {
  int topic_a = 0;
  int topic_b = 0;
  double score = 0.0;  // mean per-language Jaccard of top-C sets
};

// All K^2 matching scores; a pair is valid iff score > validity_fraction *
// max score; each topic of A keeps its best valid partner in B.
std::vector<AlignedPair> align_topics(const TrainedModel& a,
                                      const TrainedModel& b, int cardinality,
                                      double validity_fraction);

struct DocFrequencyReport {
  // mean document frequency over the words of each derived set; absent when
  // the set is empty
  std::optional<double> shared;      // W+
  std::optional<double> only_first;  // words only in the first set
  std::optional<double> only_second;
  std::size_t shared_count = 0;
  std::size_t only_first_count = 0;
  std::size_t only_second_count = 0;
};

DocFrequencyReport doc_frequency_report(const TopicWordSet& first,
                                        const TopicWordSet& second,
                                        const PairedCorpus& corpus,
                                        const Vocabulary& vocab1,
                                        const Vocabulary& vocab2);

// cos(P_doc,P)/cos(P_voc,P) where P is the normalized elementwise product.
double strength_ratio(const std::vector<double>& doc_vote,
                      const std::vector<double>& word_vote);

struct StrengthReport {
  double mean = 0.0;
  std::size_t tokens = 0;
  std::array<double, 11> deciles{};  // 0%, 10%, ..., 100%
};

// Per-token ratio of document-vote vs word-vote influence on the sampling
// conditional, averaged over every token of both languages.
StrengthReport transfer_strength(SamplerState& state);

}  // namespace mlt
