#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "claimcheck/analyzer.hpp"
#include "claimcheck/corpus.hpp"

namespace claimcheck {

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

struct Posting {
  int64_t doc_id;
  int term_frequency;
  bool operator==(const Posting&) const = default;
};

// Inverted index over title + abstract sentences of each document. Immutable
// after build; concurrent readers are safe.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  static InvertedIndex build(const Corpus& corpus, const Analyzer& analyzer);

  size_t doc_count() const { return doc_lengths_.size(); }
  double avg_doc_length() const { return avgdl_; }
  bool contains_doc(int64_t doc_id) const { return doc_lengths_.count(doc_id) != 0; }
  int doc_length(int64_t doc_id) const;

  // nullptr when the term is unindexed. Postings are sorted by doc_id.
  const std::vector<Posting>* postings(const std::string& term) const;
  size_t document_frequency(const std::string& term) const;

  // Lucene-style non-negative idf: ln(1 + (N - df + 0.5) / (df + 0.5)).
  double idf(const std::string& term) const;

  double bm25_score(const std::vector<std::string>& query_terms, int64_t doc_id,
                    const Bm25Params& params = {}) const;

  // BM25-weighted score of an arbitrary token sequence (not an indexed doc)
  // against a query, using this index's global statistics.
  double bm25_passage_score(const std::vector<std::string>& query_terms,
                            const std::vector<std::string>& passage_terms,
                            const Bm25Params& params = {}) const;

  const Analyzer::Options& analyzer_options() const { return analyzer_options_; }

  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

  bool operator==(const InvertedIndex&) const = default;

 private:
  std::map<std::string, std::vector<Posting>> postings_;
  std::map<int64_t, int> doc_lengths_;
  double avgdl_ = 0.0;
  Analyzer::Options analyzer_options_;
};

}  // namespace claimcheck
