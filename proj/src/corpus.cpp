#include "mlt/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "mlt/rng.hpp"

namespace mlt {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = fnv1a64(lang);
  const char sep = '\n';
  for (const auto& t : types) {
    h = fnv1a64(t, h);
    h = fnv1a64(&sep, 1, h);
  }
  return h;
}

std::vector<RawDocument> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path);
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed JSON line: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("tokens"))
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": document object needs \"id\" and \"tokens\"");
    RawDocument d;
    try {
      d.id = j.at("id").get<std::string>();
      if (j.contains("lang")) d.lang = j.at("lang").get<std::string>();
      d.tokens = j.at("tokens").get<std::vector<std::string>>();
      if (j.contains("labels") && !j.at("labels").is_null())
        d.labels = j.at("labels").get<std::vector<std::string>>();
      if (j.contains("link") && !j.at("link").is_null())
        d.link = j.at("link").get<std::string>();
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": bad field type: " + e.what());
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_jsonl(const std::string& path, const std::vector<RawDocument>& docs) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write corpus file: " + path);
  for (const auto& d : docs) {
    json j;
    j["id"] = d.id;
    j["lang"] = d.lang;
    j["tokens"] = d.tokens;
    if (!d.labels.empty()) j["labels"] = d.labels;
    if (!d.link.empty()) j["link"] = d.link;
    out << j.dump() << "\n";
  }
}

static std::vector<std::string> read_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stoplist file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

CorpusSide index_documents(std::vector<RawDocument> raw, const std::string& lang,
                           const std::vector<std::string>& stoplist,
                           int frequency_cutoff, const std::string& origin) {
  CorpusSide side;
  side.report.path = origin;
  side.report.docs = raw.size();

  std::unordered_set<std::string> seen_ids;
  for (const auto& d : raw) {
    if (!d.lang.empty() && d.lang != lang)
      throw InputError(origin + ": document \"" + d.id + "\" has lang \"" +
                       d.lang + "\", expected \"" + lang + "\"");
    if (!seen_ids.insert(d.id).second)
      throw InputError(origin + ": duplicate document id \"" + d.id + "\"");
  }

  // Raw type counts; appearance order remembered for stable vocabulary ids.
  std::unordered_map<std::string, std::int64_t> counts;
  std::vector<std::string> order;
  for (const auto& d : raw) {
    for (const auto& t : d.tokens) {
      auto [it, inserted] = counts.try_emplace(t, 0);
      if (inserted) order.push_back(t);
      it->second++;
      side.report.raw_tokens++;
    }
  }
  side.report.raw_types = order.size();

  // The frequency cut ranks raw counts (stopwords included), ties by type
  // string so the boundary is deterministic.
  std::unordered_set<std::string> cut;
  if (frequency_cutoff > 0) {
    std::vector<std::string> ranked = order;
    std::sort(ranked.begin(), ranked.end(),
              [&](const std::string& a, const std::string& b) {
                auto ca = counts[a], cb = counts[b];
                if (ca != cb) return ca > cb;
                return a < b;
              });
    std::size_t n = std::min<std::size_t>(frequency_cutoff, ranked.size());
    cut.insert(ranked.begin(), ranked.begin() + n);
  }
  std::unordered_set<std::string> stop(stoplist.begin(), stoplist.end());

  side.vocab.lang = lang;
  for (const auto& t : order) {
    bool stopped = stop.count(t) > 0;
    bool cutted = cut.count(t) > 0;
    if (stopped) side.report.stoplist_removed++;
    if (cutted && !stopped) side.report.frequency_cut_removed++;
    if (stopped || cutted) continue;
    side.vocab.index.emplace(t, side.vocab.size());
    side.vocab.types.push_back(t);
    side.vocab.frequency.push_back(counts[t]);
  }
  side.report.kept_types = side.vocab.types.size();

  side.docs.reserve(raw.size());
  for (auto& d : raw) {
    Document doc;
    doc.id = std::move(d.id);
    doc.lang = lang;
    doc.labels = std::move(d.labels);
    doc.link = std::move(d.link);
    for (const auto& t : d.tokens) {
      std::int32_t id = side.vocab.lookup(t);
      if (id >= 0) {
        doc.tokens.push_back(id);
        side.report.kept_tokens++;
      }
    }
    if (doc.tokens.empty()) side.report.empty_doc_ids.push_back(doc.id);
    side.docs.push_back(std::move(doc));
  }
  return side;
}

CorpusSide load_corpus(const std::string& path, const std::string& lang,
                       const std::string& stoplist_path, int frequency_cutoff) {
  if (lang.empty()) throw InputError("load_corpus: lang must be nonempty");
  std::vector<std::string> stoplist;
  if (!stoplist_path.empty()) stoplist = read_stoplist(stoplist_path);
  return index_documents(read_jsonl(path), lang, stoplist, frequency_cutoff,
                         path);
}

PairedCorpus pair_documents(std::vector<Document> side1,
                            std::vector<Document> side2) {
  std::unordered_map<std::string, std::int32_t> idx1, idx2;
  for (std::size_t i = 0; i < side1.size(); i++)
    idx1.emplace(side1[i].id, static_cast<std::int32_t>(i));
  for (std::size_t j = 0; j < side2.size(); j++)
    idx2.emplace(side2[j].id, static_cast<std::int32_t>(j));

  std::set<std::pair<std::int32_t, std::int32_t>> links;
  std::vector<std::string> dangling;
  for (std::size_t i = 0; i < side1.size(); i++) {
    if (side1[i].link.empty()) continue;
    auto it = idx2.find(side1[i].link);
    if (it == idx2.end())
      dangling.push_back(side1[i].id + " -> " + side1[i].link);
    else
      links.emplace(static_cast<std::int32_t>(i), it->second);
  }
  for (std::size_t j = 0; j < side2.size(); j++) {
    if (side2[j].link.empty()) continue;
    auto it = idx1.find(side2[j].link);
    if (it == idx1.end())
      dangling.push_back(side2[j].id + " -> " + side2[j].link);
    else
      links.emplace(it->second, static_cast<std::int32_t>(j));
  }
  if (!dangling.empty()) {
    std::string msg = "pair_documents: dangling link ids:";
    for (const auto& s : dangling) msg += " " + s;
    throw InputError(msg);
  }

  std::unordered_set<std::int32_t> used1, used2;
  for (const auto& [i, j] : links) {
    if (!used1.insert(i).second)
      throw InputError("pair_documents: document \"" + side1[i].id +
                       "\" appears in more than one pair");
    if (!used2.insert(j).second)
      throw InputError("pair_documents: document \"" + side2[j].id +
                       "\" appears in more than one pair");
  }

  PairedCorpus out;
  out.side1 = std::move(side1);
  out.side2 = std::move(side2);
  out.pairs.assign(links.begin(), links.end());  // set order = by side1 index
  return out;
}

PairedCorpus subsample_links(PairedCorpus paired, double proportion,
                             std::uint64_t seed) {
  if (proportion < 0.0 || proportion > 1.0)
    throw InputError("subsample_links: proportion must be in [0,1]");
  const std::size_t n = paired.pairs.size();
  const auto keep =
      static_cast<std::size_t>(std::lround(proportion * static_cast<double>(n)));
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; i++) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<std::pair<std::int32_t, std::int32_t>> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; i++) kept.push_back(paired.pairs[perm[i]]);
  std::sort(kept.begin(), kept.end());
  paired.pairs = std::move(kept);
  return paired;
}

Lexicon load_lexicon(const std::string& path, const Vocabulary& vocab1,
                     const Vocabulary& vocab2) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file: " + path);
  Lexicon lex;
  std::set<std::pair<std::int32_t, std::int32_t>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed lexicon line (want source<TAB>target)");
    lex.raw_entries++;
    std::int32_t a = vocab1.lookup(line.substr(0, tab));
    std::int32_t b = vocab2.lookup(line.substr(tab + 1));
    if (a < 0 || b < 0) continue;
    if (seen.emplace(a, b).second) lex.entries.emplace_back(a, b);
  }
  return lex;
}

Lexicon subsample_lexicon(const Lexicon& lex, double proportion,
                          LexiconSampling mode, const Vocabulary& vocab1,
                          const Vocabulary& vocab2, std::uint64_t seed) {
  if (proportion < 0.0 || proportion > 1.0)
    throw InputError("subsample_lexicon: proportion must be in [0,1]");
  const std::size_t n = lex.entries.size();
  const auto keep =
      static_cast<std::size_t>(std::lround(proportion * static_cast<double>(n)));
  Lexicon out;
  out.raw_entries = lex.raw_entries;
  if (mode == LexiconSampling::random) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; i++) perm[i] = i;
    Rng rng(seed);
    rng.shuffle(perm);
    for (std::size_t i = 0; i < keep; i++)
      out.entries.push_back(lex.entries[perm[i]]);
    std::sort(out.entries.begin(), out.entries.end());
  } else {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; i++) order[i] = i;
    auto score = [&](std::size_t i) {
      const auto& [a, b] = lex.entries[i];
      return std::max(vocab1.frequency[a], vocab2.frequency[b]);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      auto sx = score(x), sy = score(y);
      if (sx != sy) return sx > sy;
      return lex.entries[x] < lex.entries[y];
    });
    for (std::size_t i = 0; i < keep; i++)
      out.entries.push_back(lex.entries[order[i]]);
    std::sort(out.entries.begin(), out.entries.end());
  }
  return out;
}

std::uint64_t corpus_fingerprint(const PairedCorpus& corpus,
                                 const Vocabulary& vocab1,
                                 const Vocabulary& vocab2) {
  std::uint64_t h = vocab1.hash();
  h = fnv1a64(&h, sizeof(h), vocab2.hash());
  for (const auto* side : {&corpus.side1, &corpus.side2}) {
    for (const auto& d : *side) {
      h = fnv1a64(d.id, h);
      h = fnv1a64_values(d.tokens.data(), d.tokens.size(), h);
    }
  }
  h = fnv1a64_values(corpus.pairs.data(), corpus.pairs.size(), h);
  return h;
}

}  // namespace mlt
