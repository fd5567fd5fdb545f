#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "claimcheck/index.hpp"
#include "claimcheck/jsonl.hpp"

namespace claimcheck {

struct LabelProbs {
  double p_true = 0.0;   // Supports
  double p_weak = 0.0;   // NoInfo
  double p_false = 0.0;  // Refutes
  bool operator==(const LabelProbs&) const = default;
};

// Relevance scoring boundary. Implementations must be safe to share across
// concurrent pipeline workers.
class RelevanceScorer {
 public:
  virtual ~RelevanceScorer() = default;
  // One probability in [0,1] per passage, positionally aligned.
  virtual std::vector<double> score_batch(const std::string& query,
                                          const std::vector<std::string>& passages) const = 0;
};

class LabelPredictor {
 public:
  virtual ~LabelPredictor() = default;
  virtual LabelProbs predict(const std::string& serialized_input) const = 0;
};

// Pure lookup table, the deterministic test oracle.
class StubScorer : public RelevanceScorer {
 public:
  explicit StubScorer(double default_score = 0.0) : default_score_(default_score) {}

  void set(const std::string& query, const std::string& passage, double score);
  std::vector<double> score_batch(const std::string& query,
                                  const std::vector<std::string>& passages) const override;

 private:
  std::map<std::pair<std::string, std::string>, double> table_;
  double default_score_;
};

class StubPredictor : public LabelPredictor {
 public:
  explicit StubPredictor(LabelProbs default_probs = {1.0 / 3, 1.0 / 3, 1.0 / 3})
      : default_probs_(default_probs) {}

  void set(const std::string& input, LabelProbs probs);
  LabelProbs predict(const std::string& serialized_input) const override;

 private:
  std::map<std::string, LabelProbs> table_;
  LabelProbs default_probs_;
};

// Stub table file: {"default": float, "scores": [{"query","passage","p"},...],
//                   "label_default": [t,w,f], "labels": [{"input","probs":[t,w,f]},...]}
std::pair<std::shared_ptr<StubScorer>, std::shared_ptr<StubPredictor>> load_stub_table(
    const std::filesystem::path& path);

// Neural-free fallback: BM25 passage score against the query squashed into
// [0,1) via s / (s + 1). Zero exactly when there is no term overlap.
class LexicalScorer : public RelevanceScorer {
 public:
  LexicalScorer(std::shared_ptr<const InvertedIndex> index, Analyzer analyzer,
                Bm25Params params = {})
      : index_(std::move(index)), analyzer_(std::move(analyzer)), params_(params) {}

  std::vector<double> score_batch(const std::string& query,
                                  const std::vector<std::string>& passages) const override;

  double score_one(const std::string& query, const std::string& passage) const;

 private:
  std::shared_ptr<const InvertedIndex> index_;
  Analyzer analyzer_;
  Bm25Params params_;
};

double squash_score(double raw);

// Uniform triple; downstream argmax tie-breaking decides. Used when a
// backend provides relevance scoring but no label model.
class UniformPredictor : public LabelPredictor {
 public:
  LabelProbs predict(const std::string&) const override { return {1.0 / 3, 1.0 / 3, 1.0 / 3}; }
};

struct GatewayOptions {
  std::string endpoint = "http://localhost:8000";
  int timeout_ms = 30000;
  int retries = 2;  // attempts = 1 + retries
  int backoff_ms = 100;
  int max_in_flight = 4;
};

// HTTP client for external inference services. Wire protocol:
//   POST /v1/score {"version":1,"query":q,"passages":[...]} -> {"scores":[...]}
//   POST /v1/label {"version":1,"input":s} -> {"probs":{"true":t,"weak":w,"false":f}}
// Unknown response fields are ignored. Retries (with exponential backoff)
// happen only on transport failures and 5xx; requests are pure scoring, so
// replays are safe. A counting semaphore bounds in-flight requests.
class RemoteGateway : public RelevanceScorer, public LabelPredictor {
 public:
  explicit RemoteGateway(GatewayOptions options);
  ~RemoteGateway() override;

  std::vector<double> score_batch(const std::string& query,
                                  const std::vector<std::string>& passages) const override;
  LabelProbs predict(const std::string& serialized_input) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

json score_request_json(const std::string& query, const std::vector<std::string>& passages);
json label_request_json(const std::string& serialized_input);

// Validates and extracts a /v1/score response; throws ProtocolError on
// malformed payloads, count mismatches, or out-of-range probabilities.
std::vector<double> parse_score_response(const json& response, size_t expected);
LabelProbs parse_label_response(const json& response);

// Append-only JSONL cassette of request/response pairs, keyed by the exact
// request object. Lines: {"kind":"score"|"label","request":...,"response":...}.
class Cassette {
 public:
  Cassette() = default;
  Cassette(const Cassette&) = delete;
  Cassette& operator=(const Cassette&) = delete;

  static std::shared_ptr<Cassette> load(const std::filesystem::path& path);

  void record(const std::string& kind, const json& request, const json& response);
  const json* find(const std::string& kind, const json& request) const;
  void save(const std::filesystem::path& path) const;
  size_t size() const;

 private:
  struct Entry {
    std::string kind;
    json request;
    json response;
  };
  std::vector<Entry> entries_;
  std::map<std::string, size_t> by_key_;
  mutable std::mutex mutex_;
};

// Serves recorded responses; a request with no recorded response is a
// GatewayUnavailable error (the cassette is the only backend).
class ReplayGateway : public RelevanceScorer, public LabelPredictor {
 public:
  explicit ReplayGateway(std::shared_ptr<const Cassette> cassette)
      : cassette_(std::move(cassette)) {}

  std::vector<double> score_batch(const std::string& query,
                                  const std::vector<std::string>& passages) const override;
  LabelProbs predict(const std::string& serialized_input) const override;

 private:
  std::shared_ptr<const Cassette> cassette_;
};

// Records every exchange of an inner backend into a cassette.
class RecordingGateway : public RelevanceScorer, public LabelPredictor {
 public:
  RecordingGateway(std::shared_ptr<RelevanceScorer> scorer,
                   std::shared_ptr<LabelPredictor> predictor, std::shared_ptr<Cassette> cassette)
      : scorer_(std::move(scorer)), predictor_(std::move(predictor)),
        cassette_(std::move(cassette)) {}

  std::vector<double> score_batch(const std::string& query,
                                  const std::vector<std::string>& passages) const override;
  LabelProbs predict(const std::string& serialized_input) const override;

 private:
  std::shared_ptr<RelevanceScorer> scorer_;
  std::shared_ptr<LabelPredictor> predictor_;
  std::shared_ptr<Cassette> cassette_;
};

}  // namespace claimcheck
