#pragma once

#include <string>
#include <vector>

#include "claimcheck/corpus.hpp"
#include "claimcheck/gateway.hpp"
#include "claimcheck/retrieval.hpp"

namespace claimcheck {

// Sliding-window span of consecutive abstract sentences; [start, end).
struct Segment {
  int64_t doc_id = 0;
  int start = 0;
  int end = 0;
  std::string text;  // sentences joined with single spaces

  bool operator==(const Segment&) const = default;
};

struct WindowingPolicy {
  int window = 6;
  int stride = 3;
};

void validate_policy(const WindowingPolicy& policy);

// Windows start at 0, stride, 2*stride, ...; a trailing window fully
// contained in the previous one is dropped, so no span is scored twice.
// Every sentence appears in at least one segment.
std::vector<Segment> segment_abstract(const AbstractDoc& doc, const WindowingPolicy& policy,
                                      bool include_title = false);

// Exact serialization handed to relevance backends (and recorded in
// cassettes by servers that apply it): used for both abstract segments and
// single sentences.
std::string serialize_relevance_input(const std::string& query, const std::string& passage);

// Document relevance = max over its segments' scores; all segments of one
// abstract go to the scorer as a single batch.
double score_abstract(const RelevanceScorer& scorer, const Claim& claim, const AbstractDoc& doc,
                      const WindowingPolicy& policy, bool include_title = false);

// Reorders first-stage candidates by score_abstract (desc, ties by doc_id)
// and truncates to k. Never introduces doc_ids.
RankedList rerank(const RelevanceScorer& scorer, const Claim& claim, const Corpus& corpus,
                  const RankedList& candidates, const WindowingPolicy& policy, size_t k,
                  bool include_title = false);

RankedList retrieve_and_rerank(const InvertedIndex& index, const Analyzer& analyzer,
                               const RelevanceScorer& scorer, const Claim& claim,
                               const Corpus& corpus, const WindowingPolicy& policy, size_t k0,
                               size_t k, const Bm25Params& params = {},
                               bool include_title = false);

}  // namespace claimcheck
