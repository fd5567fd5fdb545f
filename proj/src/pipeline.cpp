#include "claimcheck/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace claimcheck {

GatewayBundle make_gateway(const PipelineConfig& config,
                           std::shared_ptr<const InvertedIndex> index) {
  GatewayBundle bundle;
  std::shared_ptr<StubScorer> stub_scorer;
  std::shared_ptr<StubPredictor> stub_predictor;
  std::shared_ptr<RemoteGateway> remote;

  auto stub = [&]() {
    if (!stub_scorer) std::tie(stub_scorer, stub_predictor) = load_stub_table(config.stub_table_path);
  };
  auto cassette = [&]() {
    if (!bundle.cassette) bundle.cassette = Cassette::load(config.cassette_path);
  };
  auto shared_remote = [&]() {
    if (!remote) remote = std::make_shared<RemoteGateway>(config.gateway);
    return remote;
  };

  const std::string scorer_name = config.backend;
  const std::string predictor_name =
      config.label_backend.empty() ? config.backend : config.label_backend;

  if (scorer_name == "stub") {
    stub();
    bundle.scorer = stub_scorer;
  } else if (scorer_name == "lexical") {
    if (!index) throw ConfigError("lexical backend needs an index");
    bundle.scorer = std::make_shared<LexicalScorer>(index, Analyzer(config.analyzer), config.bm25);
  } else if (scorer_name == "remote") {
    bundle.scorer = shared_remote();
  } else if (scorer_name == "replay") {
    cassette();
    bundle.scorer = std::make_shared<ReplayGateway>(bundle.cassette);
  } else {
    throw ConfigError("unknown backend '" + scorer_name + "'");
  }

  if (predictor_name == "stub") {
    stub();
    bundle.predictor = stub_predictor;
  } else if (predictor_name == "lexical") {
    // No lexical label model exists; stay neutral and let argmax
    // tie-breaking decide. A real backend can be picked via label_backend.
    bundle.predictor = std::make_shared<UniformPredictor>();
  } else if (predictor_name == "remote") {
    bundle.predictor = shared_remote();
  } else if (predictor_name == "replay") {
    cassette();
    bundle.predictor = std::make_shared<ReplayGateway>(bundle.cassette);
  } else {
    throw ConfigError("unknown label backend '" + predictor_name + "'");
  }

  // A cassette path alongside a live backend means: record this run.
  const bool any_live = scorer_name == "remote" || predictor_name == "remote" ||
                        scorer_name == "stub" || predictor_name == "stub" ||
                        scorer_name == "lexical" || predictor_name == "lexical";
  if (!config.cassette_path.empty() && any_live && scorer_name != "replay" &&
      predictor_name != "replay") {
    bundle.cassette = std::make_shared<Cassette>();
    bundle.recording = true;
    auto recorder =
        std::make_shared<RecordingGateway>(bundle.scorer, bundle.predictor, bundle.cassette);
    bundle.scorer = recorder;
    bundle.predictor = recorder;
  }
  return bundle;
}

namespace {

struct ClaimWork {
  RankedList first_stage;
  RankedList reranked;
  std::vector<RationaleSelection> selections;
  std::vector<LabelPrediction> predictions;
  ClaimResult result;
  ClaimVerdict verdict;
};

ClaimWork process_claim(const PipelineConfig& config, const Corpus& corpus, const Claim& claim,
                        const InvertedIndex& index, const Analyzer& analyzer,
                        const GatewayBundle& gateway) {
  ClaimWork work;
  work.first_stage = retrieve(index, analyzer, claim, config.k0, config.bm25);
  if (config.stage == PipelineStage::Retrieve) return work;

  work.reranked = rerank(*gateway.scorer, claim, corpus, work.first_stage, config.windowing,
                         config.k, config.include_title);
  if (config.stage == PipelineStage::Rerank) return work;

  for (const ScoredDoc& entry : work.reranked.entries) {
    RationaleSelection selection = select_sentences(*gateway.scorer, claim, corpus.at(entry.doc_id),
                                                    config.selection_threshold);
    if (config.cap_globally) selection = cap_selection(selection, config.selection_cap);
    work.selections.push_back(std::move(selection));
  }
  if (config.stage == PipelineStage::Select) return work;

  for (const RationaleSelection& selection : work.selections)
    work.predictions.push_back(
        predict_label(*gateway.predictor, claim, selection, corpus.at(selection.doc_id)));
  work.result = assemble_pipeline_output(work.reranked, work.selections, work.predictions);
  if (config.claim_level)
    work.verdict = covid_aggregate(claim, work.predictions, work.selections);
  return work;
}

}  // namespace

PipelineOutput run_pipeline(const PipelineConfig& config, const Corpus& corpus,
                            const std::vector<Claim>& claims, const InvertedIndex& index,
                            const GatewayBundle& gateway) {
  config.validate();
  const Analyzer analyzer(config.analyzer);
  std::vector<ClaimWork> work(claims.size());

  const size_t workers = std::min(config.workers, std::max<size_t>(claims.size(), 1));
  if (workers <= 1) {
    for (size_t i = 0; i < claims.size(); ++i)
      work[i] = process_claim(config, corpus, claims[i], index, analyzer, gateway);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= claims.size()) return;
        try {
          work[i] = process_claim(config, corpus, claims[i], index, analyzer, gateway);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> threads;
    for (size_t t = 0; t < workers; ++t) threads.emplace_back(body);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  PipelineOutput output;
  for (ClaimWork& w : work) {
    output.first_stage.push_back(std::move(w.first_stage));
    if (config.stage >= PipelineStage::Rerank) output.reranked.push_back(std::move(w.reranked));
    if (config.stage >= PipelineStage::Select)
      for (RationaleSelection& s : w.selections) output.selections.push_back(std::move(s));
    if (config.stage >= PipelineStage::Label) {
      for (LabelPrediction& p : w.predictions) output.predictions.push_back(std::move(p));
      output.results.push_back(std::move(w.result));
      if (config.claim_level) output.verdicts.push_back(std::move(w.verdict));
    }
  }
  return output;
}

PipelineFiles pipeline_files(const std::filesystem::path& output_dir) {
  PipelineFiles files;
  files.first_stage_run = output_dir / "run_firststage.tsv";
  files.reranked_run = output_dir / "run_reranked.tsv";
  files.selections = output_dir / "selections.jsonl";
  files.predictions = output_dir / "predictions.jsonl";
  files.results = output_dir / "results.jsonl";
  files.verdicts = output_dir / "verdicts.jsonl";
  return files;
}

void write_pipeline_output(const PipelineOutput& output, const PipelineConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  const PipelineFiles files = pipeline_files(config.output_dir);
  save_run(output.first_stage, files.first_stage_run);
  if (config.stage >= PipelineStage::Rerank) save_run(output.reranked, files.reranked_run);
  if (config.stage >= PipelineStage::Select) save_selections(output.selections, files.selections);
  if (config.stage >= PipelineStage::Label) {
    save_predictions(output.predictions, files.predictions);
    save_results(output.results, files.results);
    if (config.claim_level) save_verdicts(output.verdicts, files.verdicts);
  }
}

}  // namespace claimcheck
