#include "claimcheck/labelling.hpp"

#include <algorithm>
#include <set>

#include "claimcheck/errors.hpp"
#include "claimcheck/jsonl.hpp"

namespace claimcheck {

std::string serialize_label_input(const Claim& claim,
                                  const std::vector<std::string>& rationale_sentences) {
  std::string out = "hypothesis: " + claim.text;
  for (size_t i = 0; i < rationale_sentences.size(); ++i)
    out += " sentence" + std::to_string(i + 1) + ": " + rationale_sentences[i];
  return out;
}

Label argmax_label(const LabelProbs& probs) {
  if (probs.p_true >= probs.p_weak && probs.p_true >= probs.p_false) return Label::Supports;
  if (probs.p_weak >= probs.p_false) return Label::NoInfo;
  return Label::Refutes;
}

LabelPrediction predict_label(const LabelPredictor& predictor, const Claim& claim,
                              const RationaleSelection& selection, const AbstractDoc& doc) {
  if (selection.claim_id != claim.claim_id || selection.doc_id != doc.doc_id)
    throw IntegrityError("selection (" + std::to_string(selection.claim_id) + "," +
                         std::to_string(selection.doc_id) + ") does not belong to claim " +
                         std::to_string(claim.claim_id) + ", doc " + std::to_string(doc.doc_id));
  LabelPrediction prediction;
  prediction.claim_id = claim.claim_id;
  prediction.doc_id = doc.doc_id;
  if (selection.kept.empty()) {
    // An evidence-free abstract is uninformative by definition.
    prediction.label = Label::NoInfo;
    prediction.probs = {0.0, 1.0, 0.0};
    return prediction;
  }
  std::vector<std::string> sentences;
  for (int idx : selection.indices_ascending()) {
    if (idx < 0 || idx >= static_cast<int>(doc.sentences.size()))
      throw IntegrityError("selected sentence " + std::to_string(idx) + " out of range for doc " +
                           std::to_string(doc.doc_id));
    sentences.push_back(doc.sentences[idx]);
  }
  prediction.probs = predictor.predict(serialize_label_input(claim, sentences));
  prediction.label = argmax_label(prediction.probs);
  return prediction;
}

ClaimVerdict covid_aggregate(const Claim& claim, const std::vector<LabelPrediction>& predictions,
                             const std::vector<RationaleSelection>& selections) {
  std::set<int64_t> prediction_docs, selection_docs;
  for (const LabelPrediction& p : predictions) {
    if (p.claim_id != claim.claim_id)
      throw IntegrityError("prediction for claim " + std::to_string(p.claim_id) +
                           " passed to aggregation of claim " + std::to_string(claim.claim_id));
    prediction_docs.insert(p.doc_id);
  }
  size_t selected_union = 0;
  for (const RationaleSelection& s : selections) {
    if (s.claim_id != claim.claim_id)
      throw IntegrityError("selection for claim " + std::to_string(s.claim_id) +
                           " passed to aggregation of claim " + std::to_string(claim.claim_id));
    selection_docs.insert(s.doc_id);
    selected_union += s.kept.size();
  }
  if (prediction_docs != selection_docs)
    throw IntegrityError("predictions and selections cover different docs for claim " +
                         std::to_string(claim.claim_id));

  ClaimVerdict verdict;
  verdict.claim_id = claim.claim_id;
  // No evidence sentence anywhere: nothing in the literature backs the
  // claim, so it is refuted. Checked before any per-abstract label logic.
  if (selected_union == 0) {
    verdict.label = Label::Refutes;
    return verdict;
  }
  bool any_supports = false;
  for (const LabelPrediction& p : predictions)
    if (p.label == Label::Supports) any_supports = true;
  verdict.label = any_supports ? Label::Supports : Label::Refutes;
  for (const LabelPrediction& p : predictions) {
    const Label mapped = p.label == Label::NoInfo ? Label::Refutes : p.label;
    if (mapped == verdict.label) verdict.contributing_doc_ids.push_back(p.doc_id);
  }
  std::sort(verdict.contributing_doc_ids.begin(), verdict.contributing_doc_ids.end());
  return verdict;
}

ClaimResult assemble_pipeline_output(const RankedList& reranked,
                                     const std::vector<RationaleSelection>& selections,
                                     const std::vector<LabelPrediction>& predictions) {
  std::map<int64_t, const RationaleSelection*> selection_by_doc;
  std::map<int64_t, const LabelPrediction*> prediction_by_doc;
  for (const RationaleSelection& s : selections) {
    if (s.claim_id != reranked.claim_id)
      throw IntegrityError("selection claim mismatch in pipeline assembly");
    selection_by_doc[s.doc_id] = &s;
  }
  for (const LabelPrediction& p : predictions) {
    if (p.claim_id != reranked.claim_id)
      throw IntegrityError("prediction claim mismatch in pipeline assembly");
    prediction_by_doc[p.doc_id] = &p;
  }
  if (selection_by_doc.size() != reranked.entries.size() ||
      prediction_by_doc.size() != reranked.entries.size())
    throw IntegrityError("stage outputs misaligned for claim " +
                         std::to_string(reranked.claim_id));

  ClaimResult result;
  result.claim_id = reranked.claim_id;
  for (const ScoredDoc& entry : reranked.entries) {
    auto sel = selection_by_doc.find(entry.doc_id);
    auto pred = prediction_by_doc.find(entry.doc_id);
    if (sel == selection_by_doc.end() || pred == prediction_by_doc.end())
      throw IntegrityError("no stage output for doc " + std::to_string(entry.doc_id) +
                           " of claim " + std::to_string(reranked.claim_id));
    if (pred->second->label == Label::NoInfo) continue;  // not evidence
    EvidenceResult evidence;
    evidence.doc_id = entry.doc_id;
    evidence.label = pred->second->label;
    evidence.probs = pred->second->probs;
    evidence.rationale = sel->second->kept;
    result.evidence.push_back(std::move(evidence));
  }
  return result;
}

void save_predictions(const std::vector<LabelPrediction>& predictions,
                      const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  for (const LabelPrediction& p : predictions) {
    json obj;
    obj["claim_id"] = p.claim_id;
    obj["doc_id"] = p.doc_id;
    obj["label"] = label_to_string(p.label);
    obj["probs"] = {p.probs.p_true, p.probs.p_weak, p.probs.p_false};
    out.stream() << obj.dump() << "\n";
  }
  out.commit();
}

std::vector<LabelPrediction> load_predictions(const std::filesystem::path& path) {
  std::vector<LabelPrediction> predictions;
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    LabelPrediction p;
    p.claim_id = require_int64(obj, "claim_id", where);
    p.doc_id = require_int64(obj, "doc_id", where);
    p.label = label_from_string(require_string(obj, "label", where));
    if (auto it = obj.find("probs"); it != obj.end() && it->is_array() && it->size() == 3)
      p.probs = {it->at(0).get<double>(), it->at(1).get<double>(), it->at(2).get<double>()};
    predictions.push_back(std::move(p));
  });
  return predictions;
}

void save_verdicts(const std::vector<ClaimVerdict>& verdicts, const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  for (const ClaimVerdict& v : verdicts) {
    json obj;
    obj["claim_id"] = v.claim_id;
    obj["label"] = label_to_string(v.label);
    out.stream() << obj.dump() << "\n";
  }
  out.commit();
}

std::vector<ClaimVerdict> load_verdicts(const std::filesystem::path& path) {
  std::vector<ClaimVerdict> verdicts;
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    ClaimVerdict v;
    v.claim_id = require_int64(obj, "claim_id", where);
    v.label = label_from_string(require_string(obj, "label", where));
    if (v.label == Label::NoInfo)
      throw ParseError(where + ": claim verdicts cannot be NOT_ENOUGH_INFO");
    verdicts.push_back(std::move(v));
  });
  return verdicts;
}

void save_results(const std::vector<ClaimResult>& results, const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  for (const ClaimResult& result : results) {
    json evidence = json::object();
    for (const EvidenceResult& e : result.evidence) {
      json sentences = json::array(), scores = json::array();
      for (const KeptSentence& s : e.rationale) {
        sentences.push_back(s.index);
        scores.push_back(s.score);
      }
      evidence[std::to_string(e.doc_id)] = {{"label", label_to_string(e.label)},
                                            {"sentences", std::move(sentences)},
                                            {"scores", std::move(scores)}};
    }
    json obj;
    obj["claim_id"] = result.claim_id;
    obj["evidence"] = std::move(evidence);
    out.stream() << obj.dump() << "\n";
  }
  out.commit();
}

std::vector<ClaimResult> load_results(const std::filesystem::path& path) {
  std::vector<ClaimResult> results;
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    ClaimResult result;
    result.claim_id = require_int64(obj, "claim_id", where);
    for (const auto& [doc_key, body] : obj.at("evidence").items()) {
      EvidenceResult evidence;
      evidence.doc_id = std::stoll(doc_key);
      evidence.label = label_from_string(body.at("label").get<std::string>());
      const auto& sentences = body.at("sentences");
      const bool has_scores = body.contains("scores") && body.at("scores").size() == sentences.size();
      for (size_t i = 0; i < sentences.size(); ++i)
        evidence.rationale.push_back(
            {sentences[i].get<int>(), has_scores ? body.at("scores")[i].get<double>() : 0.0});
      result.evidence.push_back(std::move(evidence));
    }
    results.push_back(std::move(result));
  });
  return results;
}

}  // namespace claimcheck
