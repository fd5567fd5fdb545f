#include "claimcheck/rerank.hpp"

#include <algorithm>

#include "claimcheck/errors.hpp"

namespace claimcheck {

void validate_policy(const WindowingPolicy& policy) {
  if (policy.window < 1)
    throw ConfigError("window must be >= 1, got " + std::to_string(policy.window));
  if (policy.stride < 1 || policy.stride > policy.window)
    throw ConfigError("stride must be in [1, window], got " + std::to_string(policy.stride));
}

std::vector<Segment> segment_abstract(const AbstractDoc& doc, const WindowingPolicy& policy,
                                      bool include_title) {
  validate_policy(policy);
  const int n = static_cast<int>(doc.sentences.size());
  std::vector<Segment> segments;
  for (int start = 0; start < n; start += policy.stride) {
    const int end = std::min(start + policy.window, n);
    if (!segments.empty() && end <= segments.back().end) break;  // contained in previous
    Segment segment;
    segment.doc_id = doc.doc_id;
    segment.start = start;
    segment.end = end;
    std::string text = include_title ? doc.title : std::string();
    for (int i = start; i < end; ++i) {
      if (!text.empty()) text.push_back(' ');
      text += doc.sentences[i];
    }
    segment.text = std::move(text);
    segments.push_back(std::move(segment));
  }
  return segments;
}

std::string serialize_relevance_input(const std::string& query, const std::string& passage) {
  return "Query: " + query + " Document: " + passage + " Relevant:";
}

double score_abstract(const RelevanceScorer& scorer, const Claim& claim, const AbstractDoc& doc,
                      const WindowingPolicy& policy, bool include_title) {
  const std::vector<Segment> segments = segment_abstract(doc, policy, include_title);
  if (segments.empty()) return 0.0;
  std::vector<std::string> passages;
  passages.reserve(segments.size());
  for (const Segment& segment : segments) passages.push_back(segment.text);
  const std::vector<double> scores = scorer.score_batch(claim.text, passages);
  return *std::max_element(scores.begin(), scores.end());
}

RankedList rerank(const RelevanceScorer& scorer, const Claim& claim, const Corpus& corpus,
                  const RankedList& candidates, const WindowingPolicy& policy, size_t k,
                  bool include_title) {
  RankedList result;
  result.claim_id = candidates.claim_id;
  result.stage = RunStage::Reranked;
  for (const ScoredDoc& entry : candidates.entries) {
    const double score =
        score_abstract(scorer, claim, corpus.at(entry.doc_id), policy, include_title);
    result.entries.push_back({entry.doc_id, score});
  }
  finalize_ranking(result, k);
  return result;
}

RankedList retrieve_and_rerank(const InvertedIndex& index, const Analyzer& analyzer,
                               const RelevanceScorer& scorer, const Claim& claim,
                               const Corpus& corpus, const WindowingPolicy& policy, size_t k0,
                               size_t k, const Bm25Params& params, bool include_title) {
  if (k > k0) throw ConfigError("rerank k (" + std::to_string(k) + ") exceeds k0 (" +
                                std::to_string(k0) + ")");
  const RankedList first_stage = retrieve(index, analyzer, claim, k0, params);
  return rerank(scorer, claim, corpus, first_stage, policy, k, include_title);
}

}  // namespace claimcheck
