#include "claimcheck/config.hpp"

#include <cstdlib>
#include <set>

namespace claimcheck {

PipelineStage pipeline_stage_from_string(const std::string& s) {
  if (s == "retrieve") return PipelineStage::Retrieve;
  if (s == "rerank") return PipelineStage::Rerank;
  if (s == "select") return PipelineStage::Select;
  if (s == "label") return PipelineStage::Label;
  throw ConfigError("unknown pipeline stage '" + s + "' (retrieve|rerank|select|label)");
}

const char* pipeline_stage_name(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::Retrieve: return "retrieve";
    case PipelineStage::Rerank: return "rerank";
    case PipelineStage::Select: return "select";
    case PipelineStage::Label: return "label";
  }
  return "?";
}

void PipelineConfig::validate() const {
  static const std::set<std::string> kBackends = {"stub", "lexical", "remote", "replay"};
  if (!kBackends.count(backend)) throw ConfigError("unknown backend '" + backend + "'");
  if (!label_backend.empty() && !kBackends.count(label_backend))
    throw ConfigError("unknown label backend '" + label_backend + "'");
  if (k > k0)
    throw ConfigError("rerank.k (" + std::to_string(k) + ") must not exceed retrieve.k0 (" +
                      std::to_string(k0) + ")");
  if (k0 < 1) throw ConfigError("retrieve.k0 must be >= 1");
  if (selection_threshold < 0.0 || selection_threshold > 1.0)
    throw ConfigError("selection.threshold must be in [0,1]");
  if (selection_cap < 1) throw ConfigError("selection.cap must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  validate_policy(windowing);
  if (gateway.retries < 0) throw ConfigError("gateway.retries must be >= 0");
  if (gateway.max_in_flight < 1) throw ConfigError("gateway.max_in_flight must be >= 1");
  if ((backend == "stub" || label_backend == "stub") && stub_table_path.empty())
    throw ConfigError("stub backend needs a stub table (--stub-table)");
  if ((backend == "replay" || label_backend == "replay") && cassette_path.empty())
    throw ConfigError("replay backend needs a cassette (--cassette)");
}

json PipelineConfig::to_json() const {
  return {
      {"paths",
       {{"corpus", corpus_path}, {"claims", claims_path}, {"output_dir", output_dir},
        {"index", index_path}}},
      {"bm25", {{"k1", bm25.k1}, {"b", bm25.b}}},
      {"retrieve", {{"k0", k0}}},
      {"rerank",
       {{"k", k}, {"window", windowing.window}, {"stride", windowing.stride},
        {"include_title", include_title}}},
      {"selection",
       {{"threshold", selection_threshold}, {"cap", selection_cap},
        {"cap_globally", cap_globally}}},
      {"analyzer",
       {{"lowercase", analyzer.lowercase}, {"stopwords", analyzer.remove_stopwords},
        {"stem", analyzer.stem}}},
      {"gateway",
       {{"backend", backend}, {"label_backend", label_backend},
        {"endpoint", gateway.endpoint}, {"timeout_ms", gateway.timeout_ms},
        {"retries", gateway.retries}, {"backoff_ms", gateway.backoff_ms},
        {"max_in_flight", gateway.max_in_flight}, {"stub_table", stub_table_path},
        {"cassette", cassette_path}}},
      {"traingen",
       {{"seed", traingen.seed}, {"negatives_topk", traingen.negatives_topk},
        {"selection_negative_ratio", traingen.selection_negative_ratio}}},
      {"eval",
       {{"recall_averaging", recall_averaging == RecallAveraging::Micro ? "micro" : "macro"}}},
      {"workers", workers},
      {"claim_level", claim_level},
      {"stage", pipeline_stage_name(stage)}};
}

namespace {

template <typename T>
void maybe(const json& obj, const char* key, T& target) {
  if (auto it = obj.find(key); it != obj.end()) target = it->get<T>();
}

}  // namespace

void apply_config_json(PipelineConfig& config, const json& obj) {
  if (auto it = obj.find("paths"); it != obj.end()) {
    maybe(*it, "corpus", config.corpus_path);
    maybe(*it, "claims", config.claims_path);
    maybe(*it, "output_dir", config.output_dir);
    maybe(*it, "index", config.index_path);
  }
  if (auto it = obj.find("bm25"); it != obj.end()) {
    maybe(*it, "k1", config.bm25.k1);
    maybe(*it, "b", config.bm25.b);
  }
  if (auto it = obj.find("retrieve"); it != obj.end()) maybe(*it, "k0", config.k0);
  if (auto it = obj.find("rerank"); it != obj.end()) {
    maybe(*it, "k", config.k);
    maybe(*it, "window", config.windowing.window);
    maybe(*it, "stride", config.windowing.stride);
    maybe(*it, "include_title", config.include_title);
  }
  if (auto it = obj.find("selection"); it != obj.end()) {
    maybe(*it, "threshold", config.selection_threshold);
    maybe(*it, "cap", config.selection_cap);
    maybe(*it, "cap_globally", config.cap_globally);
  }
  if (auto it = obj.find("analyzer"); it != obj.end()) {
    maybe(*it, "lowercase", config.analyzer.lowercase);
    maybe(*it, "stopwords", config.analyzer.remove_stopwords);
    maybe(*it, "stem", config.analyzer.stem);
  }
  if (auto it = obj.find("gateway"); it != obj.end()) {
    maybe(*it, "backend", config.backend);
    maybe(*it, "label_backend", config.label_backend);
    maybe(*it, "endpoint", config.gateway.endpoint);
    maybe(*it, "timeout_ms", config.gateway.timeout_ms);
    maybe(*it, "retries", config.gateway.retries);
    maybe(*it, "backoff_ms", config.gateway.backoff_ms);
    maybe(*it, "max_in_flight", config.gateway.max_in_flight);
    maybe(*it, "stub_table", config.stub_table_path);
    maybe(*it, "cassette", config.cassette_path);
  }
  if (auto it = obj.find("traingen"); it != obj.end()) {
    maybe(*it, "seed", config.traingen.seed);
    maybe(*it, "negatives_topk", config.traingen.negatives_topk);
    maybe(*it, "selection_negative_ratio", config.traingen.selection_negative_ratio);
  }
  if (auto it = obj.find("eval"); it != obj.end()) {
    std::string averaging;
    maybe(*it, "recall_averaging", averaging);
    if (averaging == "micro") config.recall_averaging = RecallAveraging::Micro;
    else if (averaging == "macro") config.recall_averaging = RecallAveraging::Macro;
    else if (!averaging.empty()) throw ConfigError("recall_averaging must be micro or macro");
  }
  maybe(obj, "workers", config.workers);
  maybe(obj, "claim_level", config.claim_level);
  if (auto it = obj.find("stage"); it != obj.end())
    config.stage = pipeline_stage_from_string(it->get<std::string>());
}

namespace {

const char* env(const char* name) { return std::getenv(name); }

void env_string(const char* name, std::string& target) {
  if (const char* v = env(name)) target = v;
}

void env_double(const char* name, double& target) {
  if (const char* v = env(name)) {
    try {
      target = std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(name) + ": cannot parse '" + v + "' as number");
    }
  }
}

template <typename Int>
void env_int(const char* name, Int& target) {
  if (const char* v = env(name)) {
    try {
      target = static_cast<Int>(std::stoll(v));
    } catch (const std::exception&) {
      throw ConfigError(std::string(name) + ": cannot parse '" + v + "' as integer");
    }
  }
}

void env_bool(const char* name, bool& target) {
  if (const char* v = env(name)) {
    const std::string s = v;
    if (s == "1" || s == "true" || s == "yes") target = true;
    else if (s == "0" || s == "false" || s == "no") target = false;
    else throw ConfigError(std::string(name) + ": cannot parse '" + s + "' as boolean");
  }
}

}  // namespace

void apply_env_overrides(PipelineConfig& config) {
  env_double("CLAIMCHECK_BM25_K1", config.bm25.k1);
  env_double("CLAIMCHECK_BM25_B", config.bm25.b);
  env_int("CLAIMCHECK_RETRIEVE_K0", config.k0);
  env_int("CLAIMCHECK_RERANK_K", config.k);
  env_int("CLAIMCHECK_RERANK_WINDOW", config.windowing.window);
  env_int("CLAIMCHECK_RERANK_STRIDE", config.windowing.stride);
  env_bool("CLAIMCHECK_RERANK_INCLUDE_TITLE", config.include_title);
  env_double("CLAIMCHECK_SELECTION_THRESHOLD", config.selection_threshold);
  env_int("CLAIMCHECK_SELECTION_CAP", config.selection_cap);
  env_bool("CLAIMCHECK_SELECTION_CAP_GLOBALLY", config.cap_globally);
  env_bool("CLAIMCHECK_ANALYZER_LOWERCASE", config.analyzer.lowercase);
  env_bool("CLAIMCHECK_ANALYZER_STOPWORDS", config.analyzer.remove_stopwords);
  env_bool("CLAIMCHECK_ANALYZER_STEM", config.analyzer.stem);
  env_string("CLAIMCHECK_BACKEND", config.backend);
  env_string("CLAIMCHECK_LABEL_BACKEND", config.label_backend);
  env_string("CLAIMCHECK_GATEWAY_ENDPOINT", config.gateway.endpoint);
  env_int("CLAIMCHECK_GATEWAY_TIMEOUT_MS", config.gateway.timeout_ms);
  env_int("CLAIMCHECK_GATEWAY_RETRIES", config.gateway.retries);
  env_int("CLAIMCHECK_GATEWAY_BACKOFF_MS", config.gateway.backoff_ms);
  env_int("CLAIMCHECK_GATEWAY_MAX_IN_FLIGHT", config.gateway.max_in_flight);
  env_string("CLAIMCHECK_STUB_TABLE", config.stub_table_path);
  env_string("CLAIMCHECK_CASSETTE", config.cassette_path);
  env_int("CLAIMCHECK_WORKERS", config.workers);
  env_int("CLAIMCHECK_TRAINGEN_SEED", config.traingen.seed);
  env_int("CLAIMCHECK_TRAINGEN_NEGATIVES_TOPK", config.traingen.negatives_topk);
}

PipelineConfig load_config(const std::filesystem::path& config_file) {
  PipelineConfig config;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("cannot open config file " + config_file.string());
    json obj;
    try {
      obj = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(config_file.string() + ": " + e.what());
    }
    apply_config_json(config, obj);
  }
  apply_env_overrides(config);
  return config;
}

}  // namespace claimcheck
