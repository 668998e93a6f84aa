#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mlt/common.hpp"

namespace mlt {

// A document as it appears on disk: tokens are still strings.
struct RawDocument {
  std::string id;
  std::string lang;
  std::vector<std::string> tokens;
  std::vector<std::string> labels;
  std::string link;  // empty when absent
};

// JSON Lines, one object per line:
//   {"id": ..., "lang": ..., "tokens": [...], "labels": [...]?, "link": ...?}
std::vector<RawDocument> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<RawDocument>& docs);

struct Document {
  std::string id;
  std::string lang;
  std::vector<std::int32_t> tokens;  // indices into the language vocabulary
  std::vector<std::string> labels;
  std::string link;
};

struct Vocabulary {
  std::string lang;
  std::vector<std::string> types;       // dense ids 0..V-1, first-appearance order
  std::vector<std::int64_t> frequency;  // raw corpus count per kept type
  std::unordered_map<std::string, std::int32_t> index;

  std::int32_t size() const { return static_cast<std::int32_t>(types.size()); }
  std::int32_t lookup(const std::string& type) const {
    auto it = index.find(type);
    return it == index.end() ? -1 : it->second;
  }
  std::uint64_t hash() const;
};

struct LoadReport {
  std::string path;
  std::size_t docs = 0;
  std::vector<std::string> empty_doc_ids;  // zero tokens after preprocessing
  std::size_t raw_types = 0;
  std::size_t kept_types = 0;
  std::size_t stoplist_removed = 0;
  std::size_t frequency_cut_removed = 0;
  std::size_t raw_tokens = 0;
  std::size_t kept_tokens = 0;
};

struct CorpusSide {
  Vocabulary vocab;
  std::vector<Document> docs;
  LoadReport report;
};

// Builds the vocabulary from raw type counts, removing stoplist entries and
// the `frequency_cutoff` most frequent raw types (0 disables the cut), then
// re-indexes documents. Empty documents are kept and flagged in the report.
CorpusSide load_corpus(const std::string& path, const std::string& lang,
                       const std::string& stoplist_path = "",
                       int frequency_cutoff = 100);

CorpusSide index_documents(std::vector<RawDocument> raw, const std::string& lang,
                           const std::vector<std::string>& stoplist,
                           int frequency_cutoff, const std::string& origin);

struct PairedCorpus {
  std::vector<Document> side1;
  std::vector<Document> side2;
  // (side1 index, side2 index), sorted by side1 index; partial 1:1 matching
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
};

PairedCorpus pair_documents(std::vector<Document> side1,
                            std::vector<Document> side2);

// Keeps round(proportion * |pairs|) pairs. One permutation is drawn per seed
// and a prefix taken, so sweeps over proportions are nested.
PairedCorpus subsample_links(PairedCorpus paired, double proportion,
                             std::uint64_t seed);

struct Lexicon {
  std::vector<std::pair<std::int32_t, std::int32_t>> entries;  // (type1, type2)
  std::size_t raw_entries = 0;  // well-formed lines before in-vocabulary filtering
};

// TSV `source<TAB>target`; `#` comment lines ignored. Entries with either
// side out of vocabulary are dropped.
Lexicon load_lexicon(const std::string& path, const Vocabulary& vocab1,
                     const Vocabulary& vocab2);

enum class LexiconSampling { random, frequency };

Lexicon subsample_lexicon(const Lexicon& lex, double proportion,
                          LexiconSampling mode, const Vocabulary& vocab1,
                          const Vocabulary& vocab2, std::uint64_t seed);

std::uint64_t corpus_fingerprint(const PairedCorpus& corpus,
                                 const Vocabulary& vocab1,
                                 const Vocabulary& vocab2);

}  // namespace mlt
