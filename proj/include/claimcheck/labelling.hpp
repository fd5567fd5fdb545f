#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "claimcheck/corpus.hpp"
#include "claimcheck/gateway.hpp"
#include "claimcheck/retrieval.hpp"
#include "claimcheck/selection.hpp"

namespace claimcheck {

struct LabelPrediction {
  int64_t claim_id = 0;
  int64_t doc_id = 0;
  Label label = Label::NoInfo;
  LabelProbs probs;

  bool operator==(const LabelPrediction&) const = default;
};

// Verdict for claim-level (binary) sets; never NoInfo.
struct ClaimVerdict {
  int64_t claim_id = 0;
  Label label = Label::Refutes;
  std::vector<int64_t> contributing_doc_ids;

  bool operator==(const ClaimVerdict&) const = default;
};

// "hypothesis: {q} sentence1: {s1} sentence2: {s2} ..." — 1-based numbering,
// single spaces, no trailing space. An empty rationale list yields just the
// hypothesis part.
std::string serialize_label_input(const Claim& claim,
                                  const std::vector<std::string>& rationale_sentences);

// argmax under the mapping true->Supports, weak->NoInfo, false->Refutes;
// ties resolve in the fixed order Supports > NoInfo > Refutes.
Label argmax_label(const LabelProbs& probs);

// Rationale sentences are serialized in ascending index order. An empty
// selection short-circuits to NoInfo with probs (0,1,0) without touching the
// predictor.
LabelPrediction predict_label(const LabelPredictor& predictor, const Claim& claim,
                              const RationaleSelection& selection, const AbstractDoc& doc);

// Claim-level aggregation for binary claim sets:
//   1. an empty union of selected sentences across abstracts forces Refutes;
//   2. otherwise NoInfo abstract labels are mapped to Refutes;
//   3. the claim verdict is the max over abstracts with Supports > Refutes.
ClaimVerdict covid_aggregate(const Claim& claim, const std::vector<LabelPrediction>& predictions,
                             const std::vector<RationaleSelection>& selections);

struct EvidenceResult {
  int64_t doc_id = 0;
  Label label = Label::NoInfo;
  LabelProbs probs;
  std::vector<KeptSentence> rationale;

  bool operator==(const EvidenceResult&) const = default;
};

// Final per-claim output: evidence abstracts with their labels and
// rationales. Abstracts predicted NoInfo are excluded.
struct ClaimResult {
  int64_t claim_id = 0;
  std::vector<EvidenceResult> evidence;

  bool operator==(const ClaimResult&) const = default;
};

// Joins aligned stage outputs for one claim; selections/predictions must
// cover exactly the reranked docs.
ClaimResult assemble_pipeline_output(const RankedList& reranked,
                                     const std::vector<RationaleSelection>& selections,
                                     const std::vector<LabelPrediction>& predictions);

// JSONL {"claim_id","doc_id","label","probs":[t,w,f]}
void save_predictions(const std::vector<LabelPrediction>& predictions,
                      const std::filesystem::path& path);
std::vector<LabelPrediction> load_predictions(const std::filesystem::path& path);

// JSONL {"claim_id","label"} with label SUPPORT|CONTRADICT
void save_verdicts(const std::vector<ClaimVerdict>& verdicts, const std::filesystem::path& path);
std::vector<ClaimVerdict> load_verdicts(const std::filesystem::path& path);

// JSONL {"claim_id","evidence":{"<doc_id>":{"label","sentences","scores"}}}
void save_results(const std::vector<ClaimResult>& results, const std::filesystem::path& path);
std::vector<ClaimResult> load_results(const std::filesystem::path& path);

}  // namespace claimcheck
