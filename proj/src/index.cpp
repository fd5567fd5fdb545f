#include "claimcheck/index.hpp"

#include <cmath>

#include "claimcheck/jsonl.hpp"

namespace claimcheck {

InvertedIndex InvertedIndex::build(const Corpus& corpus, const Analyzer& analyzer) {
  InvertedIndex index;
  index.analyzer_options_ = analyzer.options();
  size_t total_length = 0;
  for (const auto& [doc_id, doc] : corpus.docs()) {
    std::string text = doc.title;
    for (const std::string& sentence : doc.sentences) {
      text.push_back(' ');
      text += sentence;
    }
    std::map<std::string, int> tf;
    size_t length = 0;
    for (std::string& token : analyzer.analyze(text)) {
      ++tf[std::move(token)];
      ++length;
    }
    index.doc_lengths_[doc_id] = static_cast<int>(length);
    total_length += length;
    // Corpus iteration is ascending by doc_id, so postings stay sorted.
    for (const auto& [term, freq] : tf) index.postings_[term].push_back({doc_id, freq});
  }
  index.avgdl_ = index.doc_lengths_.empty()
                     ? 0.0
                     : static_cast<double>(total_length) / index.doc_lengths_.size();
  return index;
}

int InvertedIndex::doc_length(int64_t doc_id) const {
  auto it = doc_lengths_.find(doc_id);
  if (it == doc_lengths_.end())
    throw LookupError("doc_id " + std::to_string(doc_id) + " not in index");
  return it->second;
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

size_t InvertedIndex::document_frequency(const std::string& term) const {
  const auto* list = postings(term);
  return list ? list->size() : 0;
}

double InvertedIndex::idf(const std::string& term) const {
  const double n = static_cast<double>(doc_count());
  const double df = static_cast<double>(document_frequency(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

namespace {

double bm25_term_weight(double tf, double idf, double doc_len, double avgdl,
                        const Bm25Params& params) {
  const double norm = params.k1 * (1.0 - params.b + params.b * doc_len / (avgdl > 0 ? avgdl : 1.0));
  return idf * tf * (params.k1 + 1.0) / (tf + norm);
}

}  // namespace

double InvertedIndex::bm25_score(const std::vector<std::string>& query_terms, int64_t doc_id,
                                 const Bm25Params& params) const {
  const double doc_len = doc_length(doc_id);
  double score = 0.0;
  for (const std::string& term : query_terms) {
    const auto* list = postings(term);
    if (!list) continue;
    auto it = std::lower_bound(list->begin(), list->end(), doc_id,
                               [](const Posting& p, int64_t id) { return p.doc_id < id; });
    if (it == list->end() || it->doc_id != doc_id) continue;
    score += bm25_term_weight(it->term_frequency, idf(term), doc_len, avgdl_, params);
  }
  return score;
}

double InvertedIndex::bm25_passage_score(const std::vector<std::string>& query_terms,
                                         const std::vector<std::string>& passage_terms,
                                         const Bm25Params& params) const {
  std::map<std::string, int> tf;
  for (const std::string& token : passage_terms) ++tf[token];
  const double len = static_cast<double>(passage_terms.size());
  double score = 0.0;
  for (const std::string& term : query_terms) {
    auto it = tf.find(term);
    if (it == tf.end()) continue;
    score += bm25_term_weight(it->second, idf(term), len, avgdl_, params);
  }
  return score;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  json obj;
  obj["format"] = "claimcheck-index";
  obj["version"] = 1;
  obj["analyzer"] = {{"lowercase", analyzer_options_.lowercase},
                     {"remove_stopwords", analyzer_options_.remove_stopwords},
                     {"stem", analyzer_options_.stem}};
  obj["avgdl"] = avgdl_;
  json lengths = json::object();
  for (const auto& [doc_id, len] : doc_lengths_) lengths[std::to_string(doc_id)] = len;
  obj["doc_lengths"] = std::move(lengths);
  json postings = json::object();
  for (const auto& [term, list] : postings_) {
    json entries = json::array();
    for (const Posting& p : list) entries.push_back({p.doc_id, p.term_frequency});
    postings[term] = std::move(entries);
  }
  obj["postings"] = std::move(postings);
  AtomicFileWriter out(path);
  out.stream() << obj.dump(2) << "\n";
  out.commit();
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (obj.value("format", "") != "claimcheck-index")
    throw ParseError(path.string() + ": not a claimcheck index artifact");
  InvertedIndex index;
  const auto& analyzer = obj.at("analyzer");
  index.analyzer_options_.lowercase = analyzer.at("lowercase").get<bool>();
  index.analyzer_options_.remove_stopwords = analyzer.at("remove_stopwords").get<bool>();
  index.analyzer_options_.stem = analyzer.at("stem").get<bool>();
  index.avgdl_ = obj.at("avgdl").get<double>();
  for (const auto& [key, value] : obj.at("doc_lengths").items())
    index.doc_lengths_[std::stoll(key)] = value.get<int>();
  for (const auto& [term, entries] : obj.at("postings").items()) {
    auto& list = index.postings_[term];
    for (const auto& entry : entries)
      list.push_back({entry.at(0).get<int64_t>(), entry.at(1).get<int>()});
  }
  return index;
}

}  // namespace claimcheck
