#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "claimcheck/corpus.hpp"
#include "claimcheck/index.hpp"

namespace claimcheck {

enum class RunStage { FirstStage, Reranked };

const char* run_stage_name(RunStage stage);
RunStage run_stage_from_string(const std::string& s);

struct ScoredDoc {
  int64_t doc_id;
  double score;
  bool operator==(const ScoredDoc&) const = default;
};

// Candidate list for one claim, sorted by score descending with ties broken
// by ascending doc_id; doc_ids unique.
struct RankedList {
  int64_t claim_id = 0;
  std::vector<ScoredDoc> entries;
  RunStage stage = RunStage::FirstStage;

  bool operator==(const RankedList&) const = default;
};

// Sorts entries into the canonical order and truncates to k (no truncation
// when k == 0).
void finalize_ranking(RankedList& list, size_t k);

RankedList retrieve(const InvertedIndex& index, const Analyzer& analyzer, const Claim& claim,
                    size_t k0, const Bm25Params& params = {});

enum class RecallAveraging { Micro, Macro };

// Recall@k over claims with gold evidence, as a percentage (0..100). Claims
// with empty gold evidence are excluded from the denominator; a missing run
// for a claim with evidence is an error.
double recall_at_k(const std::vector<RankedList>& runs, const std::vector<Claim>& claims,
                   size_t k, RecallAveraging averaging = RecallAveraging::Micro);

// Run-file interchange: one line per entry, "claim_id\tdoc_id\trank\tscore\tstage".
void save_run(const std::vector<RankedList>& runs, const std::filesystem::path& path);
std::vector<RankedList> load_run(const std::filesystem::path& path);

}  // namespace claimcheck
