#pragma once

#include "claimcheck/evaluation.hpp"

namespace claimcheck {

// Direct nested-loop transliteration of the evaluation definitions, with no
// indexing shortcuts, kept deliberately independent of the main evaluators.
// Only for small instances (<= 50 claims); used to cross-check the fast path.
AbstractLevelReport brute_force_eval_abstract(const std::vector<Claim>& gold,
                                              const PredictionMap& predictions, size_t cap = 3);
SentenceLevelReport brute_force_eval_sentence(const std::vector<Claim>& gold,
                                              const PredictionMap& predictions);

}  // namespace claimcheck
