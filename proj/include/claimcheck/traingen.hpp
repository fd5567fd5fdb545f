#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "claimcheck/corpus.hpp"
#include "claimcheck/index.hpp"
#include "claimcheck/jsonl.hpp"
#include "claimcheck/rerank.hpp"

namespace claimcheck {

enum class TrainStage { Rerank, Selection, Labelling };

const char* train_stage_name(TrainStage stage);

struct TrainExample {
  std::string input;
  std::string target;  // rerank/selection: true|false; labelling: true|weak|false
  TrainStage stage = TrainStage::Rerank;
  int64_t claim_id = 0;
  int64_t doc_id = 0;
  std::vector<int> sentence_indices;

  bool operator==(const TrainExample&) const = default;
};

struct TraingenOptions {
  uint64_t seed = 0;
  size_t negatives_topk = 10;       // BM25 pool for rerank negatives
  size_t selection_negative_ratio = 1;  // negatives per positive
  WindowingPolicy windowing;
  Bm25Params bm25;
};

struct TraingenResult {
  std::vector<TrainExample> examples;
  std::vector<std::string> warnings;
};

// One positive per (claim, cited abstract) segment; one negative abstract per
// claim drawn uniformly from the top-k BM25 candidates that are not ground
// truth, again one example per segment.
TraingenResult build_rerank_examples(const std::vector<Claim>& claims, const Corpus& corpus,
                                     const InvertedIndex& index, const Analyzer& analyzer,
                                     const TraingenOptions& options);

// Positives: every gold rationale sentence. Negatives: seeded sample of
// non-rationale sentences from the same claim's evidence abstracts, at the
// configured ratio.
TraingenResult build_selection_examples(const std::vector<Claim>& claims, const Corpus& corpus,
                                        const TraingenOptions& options);

// One true/false example per gold evidence set; one "weak" example per cited
// abstract built from 1 or 2 seeded-random non-rationale sentences.
TraingenResult build_label_examples(const std::vector<Claim>& claims, const Corpus& corpus,
                                    const TraingenOptions& options);

// {stage}.train.tsv (input TAB target) + {stage}.provenance.jsonl
void save_examples(const std::vector<TrainExample>& examples, const std::filesystem::path& tsv_path,
                   const std::filesystem::path& provenance_path);

// Recipe parameters plus the external trainer's published hyperparameters,
// recorded for reproducibility; nothing here is executed.
json traingen_manifest(const TraingenOptions& options);

// Deterministic bounded draw (rejection sampling over mt19937_64 output), so
// generated datasets are byte-identical across standard library
// implementations.
uint64_t uniform_index(std::mt19937_64& rng, uint64_t n);

}  // namespace claimcheck
