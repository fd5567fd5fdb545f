#include "claimcheck/evaluation_oracle.hpp"

#include <algorithm>

#include "claimcheck/errors.hpp"

namespace claimcheck {
namespace {

void check_size(const std::vector<Claim>& gold) {
  if (gold.size() > 50)
    throw EvalError("brute-force oracle is limited to 50 claims, got " +
                    std::to_string(gold.size()));
}

// Predicted sentence indices for one pair, optionally capped by
// re-sorting a copy the slow way.
std::vector<int> oracle_selection(const PredictedAbstract& pa, size_t cap) {
  std::vector<KeptSentence> entries = pa.rationale;
  for (size_t i = 0; i + 1 < entries.size(); ++i)  // bubble sort, intentionally naive
    for (size_t j = 0; j + 1 < entries.size() - i; ++j) {
      const bool swap = entries[j].score < entries[j + 1].score ||
                        (entries[j].score == entries[j + 1].score &&
                         entries[j].index > entries[j + 1].index);
      if (swap) std::swap(entries[j], entries[j + 1]);
    }
  if (cap > 0 && entries.size() > cap) entries.resize(cap);
  std::vector<int> indices;
  for (const KeptSentence& s : entries)
    if (!std::count(indices.begin(), indices.end(), s.index)) indices.push_back(s.index);
  return indices;
}

bool contains(const std::vector<int>& haystack, int needle) {
  return std::count(haystack.begin(), haystack.end(), needle) != 0;
}

bool rationale_covered(const std::vector<int>& rationale, const std::vector<int>& selection) {
  for (int idx : rationale)
    if (!contains(selection, idx)) return false;
  return true;
}

void check_known_claims(const std::vector<Claim>& gold, const PredictionMap& predictions) {
  for (const auto& [claim_id, docs] : predictions) {
    bool known = false;
    for (const Claim& claim : gold)
      if (claim.claim_id == claim_id) known = true;
    if (!known) throw EvalError("prediction references unknown claim " + std::to_string(claim_id));
  }
}

}  // namespace

AbstractLevelReport brute_force_eval_abstract(const std::vector<Claim>& gold,
                                              const PredictionMap& predictions, size_t cap) {
  check_size(gold);
  check_known_claims(gold, predictions);
  AbstractLevelReport report;

  for (const Claim& claim : gold)
    if (claim.gold)
      for ([[maybe_unused]] const auto& entry : claim.gold->evidence) ++report.gold_pairs;

  for (const auto& [claim_id, docs] : predictions) {
    for (const auto& [doc_id, pa] : docs) {
      if (pa.label == Label::NoInfo) continue;
      ++report.predicted_pairs;
      for (const Claim& claim : gold) {
        if (claim.claim_id != claim_id || !claim.gold) continue;
        for (const auto& [gold_doc, entry] : claim.gold->evidence) {
          if (gold_doc != doc_id) continue;
          if (entry.label != pa.label) continue;
          ++report.correctly_labelled;
          const std::vector<int> selection = oracle_selection(pa, cap);
          bool rationalized = false;
          for (const auto& rationale : entry.rationales)
            if (rationale_covered(rationale, selection)) rationalized = true;
          if (rationalized) ++report.correctly_rationalized;
        }
      }
    }
  }

  if (report.predicted_pairs == 0) report.flags.push_back("abstract precision denominator is zero");
  if (report.gold_pairs == 0) report.flags.push_back("abstract recall denominator is zero");
  report.label_only = make_prf(report.correctly_labelled, report.predicted_pairs, report.gold_pairs);
  report.label_rationale =
      make_prf(report.correctly_rationalized, report.predicted_pairs, report.gold_pairs);
  return report;
}

SentenceLevelReport brute_force_eval_sentence(const std::vector<Claim>& gold,
                                              const PredictionMap& predictions) {
  check_size(gold);
  check_known_claims(gold, predictions);
  SentenceLevelReport report;

  for (const Claim& claim : gold) {
    if (!claim.gold) continue;
    for (const auto& [doc_id, entry] : claim.gold->evidence) {
      std::vector<int> seen;
      for (const auto& rationale : entry.rationales)
        for (int idx : rationale)
          if (!contains(seen, idx)) seen.push_back(idx);
      report.gold_sentences += seen.size();
    }
  }

  for (const auto& [claim_id, docs] : predictions) {
    for (const auto& [doc_id, pa] : docs) {
      if (pa.label == Label::NoInfo) continue;
      const std::vector<int> selection = oracle_selection(pa, 0);
      report.predicted_sentences += selection.size();
      for (const Claim& claim : gold) {
        if (claim.claim_id != claim_id || !claim.gold) continue;
        for (const auto& [gold_doc, entry] : claim.gold->evidence) {
          if (gold_doc != doc_id) continue;
          for (int s : selection) {
            bool correct = false;
            for (const auto& rationale : entry.rationales)
              if (contains(rationale, s) && rationale_covered(rationale, selection)) correct = true;
            if (correct) {
              ++report.correctly_selected;
              if (entry.label == pa.label) ++report.correctly_labelled;
            }
          }
        }
      }
    }
  }

  if (report.predicted_sentences == 0)
    report.flags.push_back("sentence precision denominator is zero");
  if (report.gold_sentences == 0) report.flags.push_back("sentence recall denominator is zero");
  report.selection_only =
      make_prf(report.correctly_selected, report.predicted_sentences, report.gold_sentences);
  report.selection_label =
      make_prf(report.correctly_labelled, report.predicted_sentences, report.gold_sentences);
  return report;
}

}  // namespace claimcheck
