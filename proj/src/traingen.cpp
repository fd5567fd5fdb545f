#include "claimcheck/traingen.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "claimcheck/labelling.hpp"
#include "claimcheck/retrieval.hpp"

namespace claimcheck {

const char* train_stage_name(TrainStage stage) {
  switch (stage) {
    case TrainStage::Rerank: return "rerank";
    case TrainStage::Selection: return "selection";
    case TrainStage::Labelling: return "label";
  }
  return "?";
}

uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
  if (n == 0) throw ConfigError("uniform_index over empty range");
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

namespace {

// Sample `count` distinct elements, preserving pool order in the output.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, size_t count,
                                          std::mt19937_64& rng) {
  std::vector<T> picked;
  while (picked.size() < count && !pool.empty()) {
    const size_t at = static_cast<size_t>(uniform_index(rng, pool.size()));
    picked.push_back(pool[at]);
    pool.erase(pool.begin() + static_cast<long>(at));
  }
  return picked;
}

void emit_segment_examples(const Claim& claim, const AbstractDoc& doc, const char* target,
                           const WindowingPolicy& policy, std::vector<TrainExample>& out) {
  for (const Segment& segment : segment_abstract(doc, policy)) {
    TrainExample example;
    example.input = serialize_relevance_input(claim.text, segment.text);
    example.target = target;
    example.stage = TrainStage::Rerank;
    example.claim_id = claim.claim_id;
    example.doc_id = doc.doc_id;
    for (int i = segment.start; i < segment.end; ++i) example.sentence_indices.push_back(i);
    out.push_back(std::move(example));
  }
}

// Sentences of this doc that belong to no rationale set of the claim.
std::vector<int> non_rationale_sentences(const Claim& claim, const AbstractDoc& doc) {
  std::set<int> rationale;
  if (claim.gold) {
    auto it = claim.gold->evidence.find(doc.doc_id);
    if (it != claim.gold->evidence.end())
      for (const auto& set : it->second.rationales) rationale.insert(set.begin(), set.end());
  }
  std::vector<int> result;
  for (int i = 0; i < static_cast<int>(doc.sentences.size()); ++i)
    if (!rationale.count(i)) result.push_back(i);
  return result;
}

}  // namespace

TraingenResult build_rerank_examples(const std::vector<Claim>& claims, const Corpus& corpus,
                                     const InvertedIndex& index, const Analyzer& analyzer,
                                     const TraingenOptions& options) {
  TraingenResult result;
  std::mt19937_64 rng(options.seed);
  for (const Claim& claim : claims) {
    if (!claim.gold || claim.gold->cited_doc_ids.empty()) continue;
    const std::set<int64_t> ground_truth(claim.gold->cited_doc_ids.begin(),
                                         claim.gold->cited_doc_ids.end());
    for (int64_t doc_id : claim.gold->cited_doc_ids)
      emit_segment_examples(claim, corpus.at(doc_id), "true", options.windowing, result.examples);

    const RankedList candidates =
        retrieve(index, analyzer, claim, options.negatives_topk, options.bm25);
    std::vector<int64_t> pool;
    for (const ScoredDoc& entry : candidates.entries)
      if (!ground_truth.count(entry.doc_id)) pool.push_back(entry.doc_id);
    if (pool.empty()) {
      result.warnings.push_back("claim " + std::to_string(claim.claim_id) +
                                ": no non-ground-truth abstract in BM25 top-" +
                                std::to_string(options.negatives_topk) + ", negative skipped");
      continue;
    }
    const int64_t negative = pool[uniform_index(rng, pool.size())];
    emit_segment_examples(claim, corpus.at(negative), "false", options.windowing, result.examples);
  }
  return result;
}

TraingenResult build_selection_examples(const std::vector<Claim>& claims, const Corpus& corpus,
                                        const TraingenOptions& options) {
  TraingenResult result;
  std::mt19937_64 rng(options.seed);
  for (const Claim& claim : claims) {
    if (!claim.gold || claim.gold->evidence.empty()) continue;
    size_t positives = 0;
    std::vector<std::pair<int64_t, int>> negative_pool;
    for (const auto& [doc_id, entry] : claim.gold->evidence) {
      const AbstractDoc& doc = corpus.at(doc_id);
      std::set<int> rationale;
      for (const auto& set : entry.rationales) rationale.insert(set.begin(), set.end());
      for (int idx : rationale) {
        TrainExample example;
        example.input = serialize_relevance_input(claim.text, doc.sentences.at(idx));
        example.target = "true";
        example.stage = TrainStage::Selection;
        example.claim_id = claim.claim_id;
        example.doc_id = doc_id;
        example.sentence_indices = {idx};
        result.examples.push_back(std::move(example));
        ++positives;
      }
      for (int idx : non_rationale_sentences(claim, doc)) negative_pool.emplace_back(doc_id, idx);
    }
    const size_t wanted = positives * options.selection_negative_ratio;
    if (negative_pool.size() < wanted)
      result.warnings.push_back("claim " + std::to_string(claim.claim_id) + ": only " +
                                std::to_string(negative_pool.size()) +
                                " non-rationale sentences for " + std::to_string(wanted) +
                                " negatives");
    for (const auto& [doc_id, idx] : sample_without_replacement(negative_pool, wanted, rng)) {
      TrainExample example;
      example.input = serialize_relevance_input(claim.text, corpus.at(doc_id).sentences.at(idx));
      example.target = "false";
      example.stage = TrainStage::Selection;
      example.claim_id = claim.claim_id;
      example.doc_id = doc_id;
      example.sentence_indices = {idx};
      result.examples.push_back(std::move(example));
    }
  }
  return result;
}

TraingenResult build_label_examples(const std::vector<Claim>& claims, const Corpus& corpus,
                                    const TraingenOptions& options) {
  TraingenResult result;
  std::mt19937_64 rng(options.seed);
  for (const Claim& claim : claims) {
    if (!claim.gold) continue;
    for (const auto& [doc_id, entry] : claim.gold->evidence) {
      const AbstractDoc& doc = corpus.at(doc_id);
      for (const auto& rationale : entry.rationales) {
        std::vector<std::string> sentences;
        for (int idx : rationale) sentences.push_back(doc.sentences.at(idx));
        TrainExample example;
        example.input = serialize_label_input(claim, sentences);
        example.target = entry.label == Label::Supports ? "true" : "false";
        example.stage = TrainStage::Labelling;
        example.claim_id = claim.claim_id;
        example.doc_id = doc_id;
        example.sentence_indices = rationale;
        result.examples.push_back(std::move(example));
      }
    }
    // Every cited abstract contributes one weak example regardless of the
    // claim's own label.
    for (int64_t doc_id : claim.gold->cited_doc_ids) {
      const AbstractDoc& doc = corpus.at(doc_id);
      std::vector<int> pool = non_rationale_sentences(claim, doc);
      if (pool.empty()) {
        result.warnings.push_back("claim " + std::to_string(claim.claim_id) + ": doc " +
                                  std::to_string(doc_id) +
                                  " has no non-rationale sentence, weak example skipped");
        continue;
      }
      const size_t count = std::min<size_t>(pool.size(), 1 + uniform_index(rng, 2));
      std::vector<int> picked = sample_without_replacement(pool, count, rng);
      std::sort(picked.begin(), picked.end());
      std::vector<std::string> sentences;
      for (int idx : picked) sentences.push_back(doc.sentences.at(idx));
      TrainExample example;
      example.input = serialize_label_input(claim, sentences);
      example.target = "weak";
      example.stage = TrainStage::Labelling;
      example.claim_id = claim.claim_id;
      example.doc_id = doc_id;
      example.sentence_indices = std::move(picked);
      result.examples.push_back(std::move(example));
    }
  }
  return result;
}

namespace {
// TSV cells cannot carry tabs or newlines; normalize to spaces.
std::string tsv_sanitize(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}
}  // namespace

void save_examples(const std::vector<TrainExample>& examples,
                   const std::filesystem::path& tsv_path,
                   const std::filesystem::path& provenance_path) {
  AtomicFileWriter tsv(tsv_path);
  AtomicFileWriter provenance(provenance_path);
  for (const TrainExample& example : examples) {
    tsv.stream() << tsv_sanitize(example.input) << '\t' << example.target << '\n';
    json row;
    row["claim_id"] = example.claim_id;
    row["doc_id"] = example.doc_id;
    row["stage"] = train_stage_name(example.stage);
    row["target"] = example.target;
    row["sentences"] = example.sentence_indices;
    provenance.stream() << row.dump() << "\n";
  }
  tsv.commit();
  provenance.commit();
}

json traingen_manifest(const TraingenOptions& options) {
  return {
      {"recipe",
       {{"seed", options.seed},
        {"negatives_topk", options.negatives_topk},
        {"selection_negative_ratio", options.selection_negative_ratio},
        {"window", options.windowing.window},
        {"stride", options.windowing.stride},
        {"bm25", {{"k1", options.bm25.k1}, {"b", options.bm25.b}}}}},
      {"external_trainer",
       {{"base_model", "T5-3B"},
        {"rerank", {{"batch_size", 128}, {"steps", 200}, {"pretraining", "MS MARCO passage"}}},
        {"selection", {{"batch_size", 128}, {"steps", 2500}, {"pretraining", "MS MARCO passage"}}},
        {"label",
         {{"batch_size", 128},
          {"checkpoint_candidates", {200, 400, 600, 800, 1000}},
          {"selection_rule", "best development-set score"}}}}}};
}

}  // namespace claimcheck
