#include "claimcheck/selection.hpp"

#include <algorithm>

#include "claimcheck/errors.hpp"
#include "claimcheck/jsonl.hpp"

namespace claimcheck {

std::vector<int> RationaleSelection::indices_ascending() const {
  std::vector<int> indices;
  indices.reserve(kept.size());
  for (const KeptSentence& s : kept) indices.push_back(s.index);
  std::sort(indices.begin(), indices.end());
  return indices;
}

namespace {
void sort_kept(std::vector<KeptSentence>& kept) {
  std::sort(kept.begin(), kept.end(), [](const KeptSentence& a, const KeptSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
}
}  // namespace

RationaleSelection select_sentences(const RelevanceScorer& scorer, const Claim& claim,
                                    const AbstractDoc& doc, double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw ConfigError("selection threshold must be in [0,1], got " + std::to_string(threshold));
  RationaleSelection selection;
  selection.claim_id = claim.claim_id;
  selection.doc_id = doc.doc_id;
  selection.threshold = threshold;
  if (doc.sentences.empty()) return selection;
  const std::vector<double> scores = scorer.score_batch(claim.text, doc.sentences);
  for (size_t i = 0; i < scores.size(); ++i)
    if (scores[i] >= threshold) selection.kept.push_back({static_cast<int>(i), scores[i]});
  sort_kept(selection.kept);
  return selection;
}

RationaleSelection cap_selection(const RationaleSelection& selection, size_t cap) {
  if (cap < 1) throw ConfigError("selection cap must be >= 1");
  if (selection.kept.size() <= cap) return selection;
  RationaleSelection capped = selection;
  capped.kept.resize(cap);  // kept is already in (score desc, index asc) order
  return capped;
}

void save_selections(const std::vector<RationaleSelection>& selections,
                     const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  for (const RationaleSelection& selection : selections) {
    json obj;
    obj["claim_id"] = selection.claim_id;
    obj["doc_id"] = selection.doc_id;
    json sentences = json::array(), scores = json::array();
    for (const KeptSentence& s : selection.kept) {
      sentences.push_back(s.index);
      scores.push_back(s.score);
    }
    obj["sentences"] = std::move(sentences);
    obj["scores"] = std::move(scores);
    out.stream() << obj.dump() << "\n";
  }
  out.commit();
}

std::vector<RationaleSelection> load_selections(const std::filesystem::path& path) {
  std::vector<RationaleSelection> selections;
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    RationaleSelection selection;
    selection.claim_id = require_int64(obj, "claim_id", where);
    selection.doc_id = require_int64(obj, "doc_id", where);
    const auto& sentences = obj.at("sentences");
    const auto& scores = obj.at("scores");
    if (sentences.size() != scores.size())
      throw ParseError(where + ": sentences/scores length mismatch");
    for (size_t i = 0; i < sentences.size(); ++i)
      selection.kept.push_back({sentences[i].get<int>(), scores[i].get<double>()});
    selections.push_back(std::move(selection));
  });
  return selections;
}

}  // namespace claimcheck
