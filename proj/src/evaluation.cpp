#include "claimcheck/evaluation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "claimcheck/errors.hpp"

namespace claimcheck {

Prf make_prf(size_t correct, size_t predicted, size_t gold) {
  Prf prf;
  prf.precision = predicted == 0 ? 0.0 : static_cast<double>(correct) / predicted;
  prf.recall = gold == 0 ? 0.0 : static_cast<double>(correct) / gold;
  const double sum = prf.precision + prf.recall;
  prf.f1 = sum == 0.0 ? 0.0 : 2.0 * prf.precision * prf.recall / sum;
  return prf;
}

PredictionMap predictions_from_results(const std::vector<ClaimResult>& results) {
  PredictionMap map;
  for (const ClaimResult& result : results) {
    auto& docs = map[result.claim_id];
    for (const EvidenceResult& e : result.evidence) docs[e.doc_id] = {e.label, e.rationale};
  }
  return map;
}

PredictionMap predictions_from_gold(const std::vector<Claim>& claims) {
  PredictionMap map;
  for (const Claim& claim : claims) {
    auto& docs = map[claim.claim_id];
    if (!claim.gold) continue;
    for (const auto& [doc_id, entry] : claim.gold->evidence) {
      PredictedAbstract pa;
      pa.label = entry.label;
      std::set<int> indices;
      for (const auto& rationale : entry.rationales) indices.insert(rationale.begin(), rationale.end());
      for (int idx : indices) pa.rationale.push_back({idx, 1.0});
      docs[doc_id] = std::move(pa);
    }
  }
  return map;
}

namespace {

const std::map<int64_t, Claim const*> index_gold(const std::vector<Claim>& gold) {
  std::map<int64_t, const Claim*> by_id;
  for (const Claim& claim : gold) by_id[claim.claim_id] = &claim;
  return by_id;
}

// Selection capped to the top `cap` sentences by (score desc, index asc).
std::set<int> capped_indices(const std::vector<KeptSentence>& rationale, size_t cap) {
  std::vector<KeptSentence> sorted = rationale;
  std::sort(sorted.begin(), sorted.end(), [](const KeptSentence& a, const KeptSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  if (cap > 0 && sorted.size() > cap) sorted.resize(cap);
  std::set<int> indices;
  for (const KeptSentence& s : sorted) indices.insert(s.index);
  return indices;
}

std::set<int> all_indices(const std::vector<KeptSentence>& rationale) {
  std::set<int> indices;
  for (const KeptSentence& s : rationale) indices.insert(s.index);
  return indices;
}

}  // namespace

bool AbstractLevelReport::counts_equal(const AbstractLevelReport& other) const {
  return predicted_pairs == other.predicted_pairs && gold_pairs == other.gold_pairs &&
         correctly_labelled == other.correctly_labelled &&
         correctly_rationalized == other.correctly_rationalized;
}

bool SentenceLevelReport::counts_equal(const SentenceLevelReport& other) const {
  return predicted_sentences == other.predicted_sentences && gold_sentences == other.gold_sentences &&
         correctly_selected == other.correctly_selected &&
         correctly_labelled == other.correctly_labelled;
}

AbstractLevelReport eval_abstract_level(const std::vector<Claim>& gold,
                                        const PredictionMap& predictions, size_t cap) {
  const auto by_id = index_gold(gold);
  AbstractLevelReport report;

  for (const Claim& claim : gold)
    if (claim.gold) report.gold_pairs += claim.gold->evidence.size();

  for (const auto& [claim_id, docs] : predictions) {
    auto it = by_id.find(claim_id);
    if (it == by_id.end())
      throw EvalError("prediction references unknown claim " + std::to_string(claim_id));
    const Claim& claim = *it->second;
    for (const auto& [doc_id, pa] : docs) {
      if (pa.label == Label::NoInfo) continue;  // not part of the evidence set
      ++report.predicted_pairs;
      if (!claim.gold) continue;
      auto gold_entry = claim.gold->evidence.find(doc_id);
      if (gold_entry == claim.gold->evidence.end()) continue;
      if (gold_entry->second.label != pa.label) continue;
      ++report.correctly_labelled;
      const std::set<int> capped = capped_indices(pa.rationale, cap);
      for (const auto& rationale : gold_entry->second.rationales) {
        const bool covered = std::all_of(rationale.begin(), rationale.end(),
                                         [&](int idx) { return capped.count(idx) != 0; });
        if (covered) {
          ++report.correctly_rationalized;
          break;
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

SentenceLevelReport eval_sentence_level(const std::vector<Claim>& gold,
                                        const PredictionMap& predictions) {
  const auto by_id = index_gold(gold);
  SentenceLevelReport report;

  for (const Claim& claim : gold) {
    if (!claim.gold) continue;
    for (const auto& [doc_id, entry] : claim.gold->evidence) {
      std::set<int> distinct;  // a sentence in several rationale sets counts once
      for (const auto& rationale : entry.rationales)
        distinct.insert(rationale.begin(), rationale.end());
      report.gold_sentences += distinct.size();
    }
  }

  for (const auto& [claim_id, docs] : predictions) {
    auto it = by_id.find(claim_id);
    if (it == by_id.end())
      throw EvalError("prediction references unknown claim " + std::to_string(claim_id));
    const Claim& claim = *it->second;
    for (const auto& [doc_id, pa] : docs) {
      if (pa.label == Label::NoInfo) continue;
      const std::set<int> selected = all_indices(pa.rationale);
      report.predicted_sentences += selected.size();
      if (!claim.gold) continue;
      auto gold_entry = claim.gold->evidence.find(doc_id);
      if (gold_entry == claim.gold->evidence.end()) continue;
      const bool label_match = gold_entry->second.label == pa.label;
      for (int s : selected) {
        bool correctly_selected = false;
        for (const auto& rationale : gold_entry->second.rationales) {
          if (!std::count(rationale.begin(), rationale.end(), s)) continue;
          const bool covered = std::all_of(rationale.begin(), rationale.end(),
                                           [&](int idx) { return selected.count(idx) != 0; });
          if (covered) {
            correctly_selected = true;
            break;
          }
        }
        if (correctly_selected) {
          ++report.correctly_selected;
          if (label_match) ++report.correctly_labelled;
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

BinaryReport eval_binary_claims(const std::vector<Claim>& gold,
                                const std::vector<ClaimVerdict>& predictions) {
  std::map<int64_t, Label> predicted;
  for (const ClaimVerdict& v : predictions) {
    if (v.label == Label::NoInfo) throw EvalError("claim verdicts cannot be NoInfo");
    predicted[v.claim_id] = v.label;
  }
  BinaryReport report;
  size_t tp_s = 0, tp_r = 0, pred_s = 0, pred_r = 0, gold_s = 0, gold_r = 0;
  for (const Claim& claim : gold) {
    if (!claim.claim_level_label)
      throw EvalError("claim " + std::to_string(claim.claim_id) +
                      " has no claim-level label; binary evaluation needs one");
    const Label truth = *claim.claim_level_label;
    if (truth == Label::NoInfo) throw EvalError("claim-level gold labels must be binary");
    auto it = predicted.find(claim.claim_id);
    if (it == predicted.end())
      throw EvalError("missing prediction for claim " + std::to_string(claim.claim_id));
    const Label guess = it->second;
    ++report.total;
    (truth == Label::Supports ? gold_s : gold_r) += 1;
    (guess == Label::Supports ? pred_s : pred_r) += 1;
    if (guess == truth) {
      ++report.correct;
      (truth == Label::Supports ? tp_s : tp_r) += 1;
    }
  }
  report.accuracy = report.total == 0 ? 0.0 : static_cast<double>(report.correct) / report.total;
  report.supports = make_prf(tp_s, pred_s, gold_s);
  report.refutes = make_prf(tp_r, pred_r, gold_r);
  report.f1_macro = (report.supports.f1 + report.refutes.f1) / 2.0;
  report.f1_binary = report.refutes.f1;
  return report;
}

namespace {
json prf_json(const Prf& prf) {
  return {{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}
void append_prf(std::ostringstream& out, const char* name, const Prf& prf) {
  out << "  " << name << ": P=" << prf.precision * 100 << " R=" << prf.recall * 100
      << " F1=" << prf.f1 * 100 << "\n";
}
}  // namespace

json report_to_json(const AbstractLevelReport& report) {
  return {{"label_only", prf_json(report.label_only)},
          {"label_rationale", prf_json(report.label_rationale)},
          {"counts",
           {{"predicted_pairs", report.predicted_pairs},
            {"gold_pairs", report.gold_pairs},
            {"correctly_labelled", report.correctly_labelled},
            {"correctly_rationalized", report.correctly_rationalized}}},
          {"flags", report.flags}};
}

json report_to_json(const SentenceLevelReport& report) {
  return {{"selection_only", prf_json(report.selection_only)},
          {"selection_label", prf_json(report.selection_label)},
          {"counts",
           {{"predicted_sentences", report.predicted_sentences},
            {"gold_sentences", report.gold_sentences},
            {"correctly_selected", report.correctly_selected},
            {"correctly_labelled", report.correctly_labelled}}},
          {"flags", report.flags}};
}

json report_to_json(const BinaryReport& report) {
  return {{"accuracy", report.accuracy}, {"f1_macro", report.f1_macro},
          {"f1_binary", report.f1_binary}, {"supports", prf_json(report.supports)},
          {"refutes", prf_json(report.refutes)},
          {"counts", {{"total", report.total}, {"correct", report.correct}}}};
}

std::string render_report(const AbstractLevelReport& report) {
  std::ostringstream out;
  out << "Abstract-level evaluation (" << report.predicted_pairs << " predicted pairs, "
      << report.gold_pairs << " gold pairs)\n";
  append_prf(out, "Label-Only      ", report.label_only);
  append_prf(out, "Label+Rationale ", report.label_rationale);
  for (const std::string& flag : report.flags) out << "  note: " << flag << "\n";
  return out.str();
}

std::string render_report(const SentenceLevelReport& report) {
  std::ostringstream out;
  out << "Sentence-level evaluation (" << report.predicted_sentences << " predicted sentences, "
      << report.gold_sentences << " gold sentences)\n";
  append_prf(out, "Selection-Only  ", report.selection_only);
  append_prf(out, "Selection+Label ", report.selection_label);
  for (const std::string& flag : report.flags) out << "  note: " << flag << "\n";
  return out.str();
}

std::string render_report(const BinaryReport& report) {
  std::ostringstream out;
  out << "Claim-level binary evaluation (" << report.total << " claims)\n"
      << "  Accuracy=" << report.accuracy * 100 << " F1-Macro=" << report.f1_macro * 100
      << " F1-Binary=" << report.f1_binary * 100 << "\n";
  append_prf(out, "Supports", report.supports);
  append_prf(out, "Refutes ", report.refutes);
  return out.str();
}

}  // namespace claimcheck
