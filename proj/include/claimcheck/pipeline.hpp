#pragma once

#include <memory>
#include <vector>

#include "claimcheck/config.hpp"
#include "claimcheck/labelling.hpp"

namespace claimcheck {

struct GatewayBundle {
  std::shared_ptr<RelevanceScorer> scorer;
  std::shared_ptr<LabelPredictor> predictor;
  std::shared_ptr<Cassette> cassette;  // set when recording or replaying
  bool recording = false;
};

// Builds the scorer/predictor pair for the configured backend. The lexical
// backend needs index statistics; pass the index used for retrieval.
GatewayBundle make_gateway(const PipelineConfig& config,
                           std::shared_ptr<const InvertedIndex> index);

struct PipelineOutput {
  std::vector<RankedList> first_stage;
  std::vector<RankedList> reranked;
  std::vector<RationaleSelection> selections;  // claim order, then rank order
  std::vector<LabelPrediction> predictions;
  std::vector<ClaimResult> results;
  std::vector<ClaimVerdict> verdicts;  // only when claim_level
};

// Runs the cascade up to config.stage for every claim. Claims are
// independent work units; with workers > 1 they are scored concurrently and
// reassembled in input order, so output is deterministic for deterministic
// backends.
PipelineOutput run_pipeline(const PipelineConfig& config, const Corpus& corpus,
                            const std::vector<Claim>& claims, const InvertedIndex& index,
                            const GatewayBundle& gateway);

struct PipelineFiles {
  std::filesystem::path first_stage_run;
  std::filesystem::path reranked_run;
  std::filesystem::path selections;
  std::filesystem::path predictions;
  std::filesystem::path results;
  std::filesystem::path verdicts;
};

PipelineFiles pipeline_files(const std::filesystem::path& output_dir);

// Writes every produced stage file (atomically); untouched stages write
// nothing.
void write_pipeline_output(const PipelineOutput& output, const PipelineConfig& config);

}  // namespace claimcheck
