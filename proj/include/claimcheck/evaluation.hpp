#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "claimcheck/corpus.hpp"
#include "claimcheck/labelling.hpp"

namespace claimcheck {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool operator==(const Prf&) const = default;
};

Prf make_prf(size_t correct, size_t predicted, size_t gold);

// System output in evaluation form: per claim, per abstract, the predicted
// label and the selected sentences. NoInfo-labelled abstracts never count as
// evidence.
struct PredictedAbstract {
  Label label = Label::NoInfo;
  std::vector<KeptSentence> rationale;
  bool operator==(const PredictedAbstract&) const = default;
};

using PredictionMap = std::map<int64_t, std::map<int64_t, PredictedAbstract>>;

PredictionMap predictions_from_results(const std::vector<ClaimResult>& results);
// Gold annotations recast as a perfect system run (used for oracle checks).
PredictionMap predictions_from_gold(const std::vector<Claim>& claims);

struct AbstractLevelReport {
  Prf label_only;
  Prf label_rationale;
  size_t predicted_pairs = 0;
  size_t gold_pairs = 0;
  size_t correctly_labelled = 0;
  size_t correctly_rationalized = 0;
  std::vector<std::string> flags;  // zero-denominator notes

  bool counts_equal(const AbstractLevelReport& other) const;
};

struct SentenceLevelReport {
  Prf selection_only;
  Prf selection_label;
  size_t predicted_sentences = 0;
  size_t gold_sentences = 0;
  size_t correctly_selected = 0;
  size_t correctly_labelled = 0;
  std::vector<std::string> flags;

  bool counts_equal(const SentenceLevelReport& other) const;
};

// Abstract-level evaluation: a predicted (claim, abstract) pair is correctly
// labelled when the abstract is gold evidence and the label matches, and
// correctly rationalized when additionally some gold rationale set is fully
// contained in the selection capped to `cap` sentences.
AbstractLevelReport eval_abstract_level(const std::vector<Claim>& gold,
                                        const PredictionMap& predictions, size_t cap = 3);

// Sentence-level evaluation: a predicted sentence counts only when its whole
// enclosing gold rationale set is covered by the (uncapped) selection;
// Selection+Label additionally requires the abstract label to match.
SentenceLevelReport eval_sentence_level(const std::vector<Claim>& gold,
                                        const PredictionMap& predictions);

struct BinaryReport {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double f1_binary = 0.0;  // F1 of the Refutes class
  Prf supports;
  Prf refutes;
  size_t total = 0;
  size_t correct = 0;
};

// Claim-level binary metrics; gold claims must carry claim-level labels and
// every gold claim needs a predicted verdict.
BinaryReport eval_binary_claims(const std::vector<Claim>& gold,
                                const std::vector<ClaimVerdict>& predictions);

json report_to_json(const AbstractLevelReport& report);
json report_to_json(const SentenceLevelReport& report);
json report_to_json(const BinaryReport& report);
std::string render_report(const AbstractLevelReport& report);
std::string render_report(const SentenceLevelReport& report);
std::string render_report(const BinaryReport& report);

}  // namespace claimcheck
