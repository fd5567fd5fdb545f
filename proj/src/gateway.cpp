#include "claimcheck/gateway.hpp"

#include <chrono>
#include <condition_variable>
#include <thread>

#include <httplib.h>

#include "claimcheck/errors.hpp"
#include "claimcheck/jsonl.hpp"

namespace claimcheck {

void StubScorer::set(const std::string& query, const std::string& passage, double score) {
  table_[{query, passage}] = score;
}

std::vector<double> StubScorer::score_batch(const std::string& query,
                                            const std::vector<std::string>& passages) const {
  std::vector<double> scores;
  scores.reserve(passages.size());
  for (const std::string& passage : passages) {
    auto it = table_.find({query, passage});
    scores.push_back(it == table_.end() ? default_score_ : it->second);
  }
  return scores;
}

void StubPredictor::set(const std::string& input, LabelProbs probs) { table_[input] = probs; }

LabelProbs StubPredictor::predict(const std::string& serialized_input) const {
  auto it = table_.find(serialized_input);
  return it == table_.end() ? default_probs_ : it->second;
}

std::pair<std::shared_ptr<StubScorer>, std::shared_ptr<StubPredictor>> load_stub_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stub table " + path.string());
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  auto scorer = std::make_shared<StubScorer>(obj.value("default", 0.0));
  for (const auto& row : obj.value("scores", json::array()))
    scorer->set(row.at("query").get<std::string>(), row.at("passage").get<std::string>(),
                row.at("p").get<double>());
  LabelProbs label_default{1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (auto it = obj.find("label_default"); it != obj.end())
    label_default = {it->at(0).get<double>(), it->at(1).get<double>(), it->at(2).get<double>()};
  auto predictor = std::make_shared<StubPredictor>(label_default);
  for (const auto& row : obj.value("labels", json::array())) {
    const auto& probs = row.at("probs");
    predictor->set(row.at("input").get<std::string>(),
                   {probs.at(0).get<double>(), probs.at(1).get<double>(), probs.at(2).get<double>()});
  }
  return {scorer, predictor};
}

double squash_score(double raw) { return raw / (raw + 1.0); }

double LexicalScorer::score_one(const std::string& query, const std::string& passage) const {
  const double raw =
      index_->bm25_passage_score(analyzer_.analyze(query), analyzer_.analyze(passage), params_);
  return squash_score(raw);
}

std::vector<double> LexicalScorer::score_batch(const std::string& query,
                                               const std::vector<std::string>& passages) const {
  std::vector<double> scores;
  scores.reserve(passages.size());
  const std::vector<std::string> query_terms = analyzer_.analyze(query);
  for (const std::string& passage : passages)
    scores.push_back(
        squash_score(index_->bm25_passage_score(query_terms, analyzer_.analyze(passage), params_)));
  return scores;
}

json score_request_json(const std::string& query, const std::vector<std::string>& passages) {
  return json{{"version", 1}, {"query", query}, {"passages", passages}};
}

json label_request_json(const std::string& serialized_input) {
  return json{{"version", 1}, {"input", serialized_input}};
}

std::vector<double> parse_score_response(const json& response, size_t expected) {
  auto it = response.find("scores");
  if (it == response.end() || !it->is_array())
    throw ProtocolError("score response missing 'scores' array");
  if (it->size() != expected)
    throw ProtocolError("score count mismatch: got " + std::to_string(it->size()) + ", expected " +
                        std::to_string(expected));
  std::vector<double> scores;
  scores.reserve(expected);
  for (const auto& v : *it) {
    if (!v.is_number()) throw ProtocolError("non-numeric score in response");
    const double p = v.get<double>();
    if (p < 0.0 || p > 1.0)
      throw ProtocolError("score " + std::to_string(p) + " outside [0,1]");
    scores.push_back(p);
  }
  return scores;
}

LabelProbs parse_label_response(const json& response) {
  auto it = response.find("probs");
  if (it == response.end() || !it->is_object())
    throw ProtocolError("label response missing 'probs' object");
  LabelProbs probs;
  try {
    probs.p_true = it->at("true").get<double>();
    probs.p_weak = it->at("weak").get<double>();
    probs.p_false = it->at("false").get<double>();
  } catch (const json::exception&) {
    throw ProtocolError("label response probs must carry numeric true/weak/false");
  }
  for (double p : {probs.p_true, probs.p_weak, probs.p_false})
    if (p < 0.0 || p > 1.0) throw ProtocolError("label probability outside [0,1]");
  return probs;
}

// ---------------------------------------------------------------------------
// Remote backend

struct RemoteGateway::Impl {
  GatewayOptions options;
  // Bounded in-flight window shared by all callers.
  mutable std::mutex slots_mutex;
  mutable std::condition_variable slots_cv;
  mutable int slots_in_use = 0;

  explicit Impl(GatewayOptions opts) : options(std::move(opts)) {}

  struct SlotGuard {
    Impl& impl;
    explicit SlotGuard(Impl& i) : impl(i) {
      std::unique_lock lock(impl.slots_mutex);
      impl.slots_cv.wait(lock, [&] { return impl.slots_in_use < impl.options.max_in_flight; });
      ++impl.slots_in_use;
    }
    ~SlotGuard() {
      {
        std::lock_guard lock(impl.slots_mutex);
        --impl.slots_in_use;
      }
      impl.slots_cv.notify_one();
    }
  };

  json post(const std::string& path, const json& body) const {
    SlotGuard guard(const_cast<Impl&>(*this));
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= options.retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(options.backoff_ms << (attempt - 1)));
      httplib::Client client(options.endpoint);
      client.set_connection_timeout(0, options.timeout_ms * 1000LL);
      client.set_read_timeout(options.timeout_ms / 1000, (options.timeout_ms % 1000) * 1000);
      auto res = client.Post(path, payload, "application/json");
      if (!res) {
        last_error = "transport: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server status " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw ProtocolError("unexpected status " + std::to_string(res->status) + " from " + path);
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("unparseable response body: ") + e.what());
      }
    }
    throw GatewayUnavailable("POST " + options.endpoint + path + " failed after " +
                             std::to_string(options.retries + 1) + " attempts (" + last_error + ")");
  }
};

RemoteGateway::RemoteGateway(GatewayOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

RemoteGateway::~RemoteGateway() = default;

std::vector<double> RemoteGateway::score_batch(const std::string& query,
                                               const std::vector<std::string>& passages) const {
  const json response = impl_->post("/v1/score", score_request_json(query, passages));
  return parse_score_response(response, passages.size());
}

LabelProbs RemoteGateway::predict(const std::string& serialized_input) const {
  const json response = impl_->post("/v1/label", label_request_json(serialized_input));
  return parse_label_response(response);
}

// ---------------------------------------------------------------------------
// Record / replay

namespace {
std::string cassette_key(const std::string& kind, const json& request) {
  return kind + "\x1f" + request.dump();
}
}  // namespace

std::shared_ptr<Cassette> Cassette::load(const std::filesystem::path& path) {
  auto cassette = std::make_shared<Cassette>();
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!obj.contains("kind") || !obj.contains("request") || !obj.contains("response"))
      throw ParseError(where + ": cassette line needs kind/request/response");
    cassette->record(obj.at("kind").get<std::string>(), obj.at("request"), obj.at("response"));
  });
  return cassette;
}

void Cassette::record(const std::string& kind, const json& request, const json& response) {
  std::lock_guard lock(mutex_);
  const std::string key = cassette_key(kind, request);
  auto it = by_key_.find(key);
  if (it != by_key_.end()) {
    entries_[it->second].response = response;  // last write wins
    return;
  }
  by_key_.emplace(key, entries_.size());
  entries_.push_back({kind, request, response});
}

const json* Cassette::find(const std::string& kind, const json& request) const {
  std::lock_guard lock(mutex_);
  auto it = by_key_.find(cassette_key(kind, request));
  return it == by_key_.end() ? nullptr : &entries_[it->second].response;
}

void Cassette::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  AtomicFileWriter out(path);
  for (const Entry& entry : entries_) {
    json line{{"kind", entry.kind}, {"request", entry.request}, {"response", entry.response}};
    out.stream() << line.dump() << "\n";
  }
  out.commit();
}

size_t Cassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<double> ReplayGateway::score_batch(const std::string& query,
                                               const std::vector<std::string>& passages) const {
  const json request = score_request_json(query, passages);
  const json* response = cassette_->find("score", request);
  if (!response)
    throw GatewayUnavailable("cassette has no recorded response for score request on query '" +
                             query + "'");
  return parse_score_response(*response, passages.size());
}

LabelProbs ReplayGateway::predict(const std::string& serialized_input) const {
  const json request = label_request_json(serialized_input);
  const json* response = cassette_->find("label", request);
  if (!response)
    throw GatewayUnavailable("cassette has no recorded response for label request");
  return parse_label_response(*response);
}

std::vector<double> RecordingGateway::score_batch(const std::string& query,
                                                  const std::vector<std::string>& passages) const {
  const std::vector<double> scores = scorer_->score_batch(query, passages);
  cassette_->record("score", score_request_json(query, passages), json{{"scores", scores}});
  return scores;
}

LabelProbs RecordingGateway::predict(const std::string& serialized_input) const {
  const LabelProbs probs = predictor_->predict(serialized_input);
  cassette_->record("label", label_request_json(serialized_input),
                    json{{"probs",
                          {{"true", probs.p_true}, {"weak", probs.p_weak}, {"false", probs.p_false}}}});
  return probs;
}

}  // namespace claimcheck
