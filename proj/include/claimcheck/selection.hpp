#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "claimcheck/corpus.hpp"
#include "claimcheck/gateway.hpp"

namespace claimcheck {

struct KeptSentence {
  int index;
  double score;
  bool operator==(const KeptSentence&) const = default;
};

// Rationale sentences kept for one (claim, abstract) pair, sorted by score
// descending then index ascending. All kept scores are >= threshold.
struct RationaleSelection {
  int64_t claim_id = 0;
  int64_t doc_id = 0;
  std::vector<KeptSentence> kept;
  double threshold = 0.0;

  std::vector<int> indices_ascending() const;
  bool operator==(const RationaleSelection&) const = default;
};

// Scores every sentence (one scorer batch per abstract) and keeps those at
// or above the threshold; "below the threshold" is strict, so a score equal
// to the threshold is kept.
RationaleSelection select_sentences(const RelevanceScorer& scorer, const Claim& claim,
                                    const AbstractDoc& doc, double threshold);

// Top-cap kept entries by (score desc, index asc); the cap belongs to
// abstract-level evaluation (uncapped selections flow to label prediction
// unless configured otherwise).
RationaleSelection cap_selection(const RationaleSelection& selection, size_t cap);

// JSONL: {"claim_id": int, "doc_id": int, "sentences": [int,...], "scores": [float,...]}
void save_selections(const std::vector<RationaleSelection>& selections,
                     const std::filesystem::path& path);
std::vector<RationaleSelection> load_selections(const std::filesystem::path& path);

}  // namespace claimcheck
