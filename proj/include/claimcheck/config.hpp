#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "claimcheck/analyzer.hpp"
#include "claimcheck/gateway.hpp"
#include "claimcheck/index.hpp"
#include "claimcheck/jsonl.hpp"
#include "claimcheck/rerank.hpp"
#include "claimcheck/retrieval.hpp"
#include "claimcheck/traingen.hpp"

namespace claimcheck {

enum class PipelineStage { Retrieve, Rerank, Select, Label };

PipelineStage pipeline_stage_from_string(const std::string& s);
const char* pipeline_stage_name(PipelineStage stage);

// Effective settings for a pipeline run. Precedence: CLI flags over
// CLAIMCHECK_* environment variables over config file over these defaults.
struct PipelineConfig {
  std::string corpus_path;
  std::string claims_path;
  std::string output_dir = ".";
  std::string index_path;  // optional prebuilt index artifact

  Bm25Params bm25;
  size_t k0 = 20;  // first-stage candidates
  size_t k = 3;    // evidence abstracts after reranking
  WindowingPolicy windowing;
  bool include_title = false;

  double selection_threshold = 0.999;
  size_t selection_cap = 3;
  bool cap_globally = false;  // cap selections before label prediction too

  Analyzer::Options analyzer;

  std::string backend = "stub";  // stub | lexical | remote | replay
  std::string label_backend;     // empty: same as backend
  std::string stub_table_path;
  std::string cassette_path;
  GatewayOptions gateway;

  TraingenOptions traingen;
  RecallAveraging recall_averaging = RecallAveraging::Micro;

  size_t workers = 1;
  bool claim_level = false;
  PipelineStage stage = PipelineStage::Label;

  void validate() const;
  json to_json() const;
};

// Layered loading: file (when non-empty) then environment overrides.
PipelineConfig load_config(const std::filesystem::path& config_file);
void apply_config_json(PipelineConfig& config, const json& obj);
void apply_env_overrides(PipelineConfig& config);

}  // namespace claimcheck
