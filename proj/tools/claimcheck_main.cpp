#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "claimcheck/config.hpp"
#include "claimcheck/evaluation.hpp"
#include "claimcheck/pipeline.hpp"

namespace cc = claimcheck;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitIntegrity = 4;

struct CommonArgs {
  std::string config_file;
  std::optional<size_t> workers;
  std::optional<std::string> backend;
  std::optional<std::string> cassette;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "JSON config file")->envname("CLAIMCHECK_CONFIG");
  cmd->add_option("--workers", args.workers, "parallel claim workers");
  cmd->add_option("--backend", args.backend, "scorer backend: stub|lexical|remote|replay");
  cmd->add_option("--cassette", args.cassette, "cassette file (replay source or recording sink)");
}

cc::PipelineConfig effective_config(const CommonArgs& args) {
  cc::PipelineConfig config = cc::load_config(args.config_file);
  if (args.workers) config.workers = *args.workers;
  if (args.backend) config.backend = *args.backend;
  if (args.cassette) config.cassette_path = *args.cassette;
  return config;
}

void write_json_file(const cc::json& obj, const std::filesystem::path& path) {
  cc::AtomicFileWriter out(path);
  out.stream() << obj.dump(2) << "\n";
  out.commit();
}

int cmd_index(const CommonArgs& common, const std::string& corpus_path,
              const std::string& out_path) {
  cc::PipelineConfig config = effective_config(common);
  const cc::Corpus corpus = cc::load_corpus(corpus_path);
  if (corpus.size() == 0) std::cerr << "warning: empty corpus, writing empty index\n";
  const cc::InvertedIndex index = cc::InvertedIndex::build(corpus, cc::Analyzer(config.analyzer));
  index.save(out_path);
  std::cout << "indexed " << index.doc_count() << " docs (avgdl " << index.avg_doc_length()
            << ") -> " << out_path << "\n";
  return kExitOk;
}

int cmd_run(const CommonArgs& common, cc::PipelineConfig config) {
  config.validate();
  const cc::Corpus corpus = cc::load_corpus(config.corpus_path);
  const std::vector<cc::Claim> claims = cc::load_claims(config.claims_path);
  auto index = std::make_shared<cc::InvertedIndex>(
      config.index_path.empty()
          ? cc::InvertedIndex::build(corpus, cc::Analyzer(config.analyzer))
          : cc::InvertedIndex::load(config.index_path));
  const cc::GatewayBundle gateway = cc::make_gateway(config, index);

  const cc::PipelineOutput output = cc::run_pipeline(config, corpus, claims, *index, gateway);
  cc::write_pipeline_output(output, config);
  if (gateway.recording && !config.cassette_path.empty())
    gateway.cassette->save(config.cassette_path);

  cc::json manifest;
  manifest["config"] = config.to_json();
  manifest["counts"] = {{"claims", claims.size()},
                        {"corpus_docs", corpus.size()},
                        {"reranked_lists", output.reranked.size()},
                        {"selections", output.selections.size()},
                        {"predictions", output.predictions.size()}};
  write_json_file(manifest, std::filesystem::path(config.output_dir) / "run_manifest.json");
  std::cout << "pipeline finished: " << claims.size() << " claims -> " << config.output_dir << "\n";
  return kExitOk;
}

int cmd_evaluate(const CommonArgs& common, const std::string& claims_path,
                 const std::string& results_path, const std::string& run_path,
                 const std::string& verdicts_path, size_t cap, const std::vector<size_t>& at,
                 const std::string& report_path) {
  cc::PipelineConfig config = effective_config(common);
  const std::vector<cc::Claim> gold = cc::load_claims(claims_path);
  cc::json report = cc::json::object();
  std::ostringstream text;

  if (!results_path.empty()) {
    const cc::PredictionMap predictions =
        cc::predictions_from_results(cc::load_results(results_path));
    const cc::AbstractLevelReport abstract_report =
        cc::eval_abstract_level(gold, predictions, cap);
    const cc::SentenceLevelReport sentence_report = cc::eval_sentence_level(gold, predictions);
    report["abstract_level"] = cc::report_to_json(abstract_report);
    report["sentence_level"] = cc::report_to_json(sentence_report);
    text << cc::render_report(abstract_report) << cc::render_report(sentence_report);
  }
  if (!run_path.empty()) {
    const std::vector<cc::RankedList> runs = cc::load_run(run_path);
    cc::json recalls = cc::json::object();
    text << "Retrieval recall (" << (config.recall_averaging == cc::RecallAveraging::Micro
                                         ? "micro"
                                         : "macro") << ")\n";
    for (size_t k : at) {
      const double r = cc::recall_at_k(runs, gold, k, config.recall_averaging);
      recalls["R@" + std::to_string(k)] = r;
      text << "  R@" << k << " = " << r << "\n";
    }
    report["recall"] = std::move(recalls);
  }
  if (!verdicts_path.empty()) {
    const cc::BinaryReport binary =
        cc::eval_binary_claims(gold, cc::load_verdicts(verdicts_path));
    report["binary"] = cc::report_to_json(binary);
    text << cc::render_report(binary);
  }
  if (report.empty()) throw cc::ConfigError("nothing to evaluate: pass --results, --run or --verdicts");

  std::cout << text.str();
  if (!report_path.empty()) write_json_file(report, report_path);
  return kExitOk;
}

int cmd_traingen(const CommonArgs& common, cc::PipelineConfig config,
                 const std::vector<std::string>& stages) {
  const cc::Corpus corpus = cc::load_corpus(config.corpus_path);
  const std::vector<cc::Claim> claims = cc::load_claims(config.claims_path);
  bool any_gold = false;
  for (const cc::Claim& claim : claims)
    if (claim.gold) any_gold = true;
  if (!any_gold)
    throw cc::IntegrityError("training generation needs claims with gold annotations");

  const cc::Analyzer analyzer(config.analyzer);
  config.traingen.windowing = config.windowing;
  config.traingen.bm25 = config.bm25;
  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path out_dir = config.output_dir;

  std::vector<std::string> warnings;
  for (const std::string& stage : stages) {
    cc::TraingenResult result;
    if (stage == "rerank") {
      const cc::InvertedIndex index = cc::InvertedIndex::build(corpus, analyzer);
      result = cc::build_rerank_examples(claims, corpus, index, analyzer, config.traingen);
    } else if (stage == "selection") {
      result = cc::build_selection_examples(claims, corpus, config.traingen);
    } else if (stage == "label") {
      result = cc::build_label_examples(claims, corpus, config.traingen);
    } else {
      throw cc::ConfigError("unknown traingen stage '" + stage + "'");
    }
    cc::save_examples(result.examples, out_dir / (stage + ".train.tsv"),
                      out_dir / (stage + ".provenance.jsonl"));
    std::cout << stage << ": " << result.examples.size() << " examples\n";
    warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
  }
  for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
  write_json_file(cc::traingen_manifest(config.traingen), out_dir / "manifest.json");
  return kExitOk;
}

int cmd_validate(const std::string& corpus_path, const std::string& claims_path) {
  const cc::Corpus corpus = cc::load_corpus(corpus_path);
  const std::vector<cc::Claim> claims = cc::load_claims(claims_path);
  const cc::ValidationReport report = cc::validate_gold(claims, corpus);
  const cc::LabelDistribution dist = cc::label_distribution(claims);
  std::cout << "corpus: " << corpus.size() << " docs, " << corpus.total_sentences()
            << " sentences\n"
            << "claims: " << dist.total << " (Supports " << dist.supports << ", NoInfo "
            << dist.noinfo << ", Refutes " << dist.refutes;
  if (dist.mixed_label_claims > 0)
    std::cout << "; " << dist.mixed_label_claims << " mixed-label claims counted once per label";
  std::cout << ")\n";
  for (const cc::ValidationIssue& issue : report.issues)
    std::cout << "issue: " << issue.describe() << "\n";
  if (!report.clean()) {
    std::cout << report.issues.size() << " issues found\n";
    return kExitIntegrity;
  }
  std::cout << "gold annotations consistent\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claimcheck: scientific claim verification pipeline"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* index_cmd = app.add_subcommand("index", "build and persist the inverted index");
  std::string index_corpus, index_out = "index.json";
  add_common(index_cmd, common);
  index_cmd->add_option("--corpus", index_corpus, "corpus JSONL")->required();
  index_cmd->add_option("--out", index_out, "index artifact path");

  auto* run_cmd = app.add_subcommand("run", "run the retrieval/selection/label cascade");
  add_common(run_cmd, common);
  std::string run_corpus, run_claims, run_outdir, run_index, run_stage, run_stub, run_label_backend;
  std::optional<size_t> run_k0, run_k, run_cap;
  std::optional<double> run_threshold;
  bool run_claim_level = false;
  run_cmd->add_option("--corpus", run_corpus, "corpus JSONL");
  run_cmd->add_option("--claims", run_claims, "claims JSONL");
  run_cmd->add_option("--out-dir", run_outdir, "output directory");
  run_cmd->add_option("--index", run_index, "prebuilt index artifact");
  run_cmd->add_option("--stage", run_stage, "last stage to run: retrieve|rerank|select|label");
  run_cmd->add_option("--stub-table", run_stub, "stub backend score table");
  run_cmd->add_option("--label-backend", run_label_backend, "override backend for label prediction");
  run_cmd->add_option("--k0", run_k0, "first-stage candidates");
  run_cmd->add_option("--k", run_k, "evidence abstracts after rerank");
  run_cmd->add_option("--threshold", run_threshold, "sentence selection threshold");
  run_cmd->add_option("--cap", run_cap, "selection cap (applies with --cap-globally)");
  run_cmd->add_flag("--claim-level", run_claim_level, "aggregate to claim verdicts");

  auto* eval_cmd = app.add_subcommand("evaluate", "score predictions against gold");
  add_common(eval_cmd, common);
  std::string eval_claims, eval_results, eval_run, eval_verdicts, eval_report;
  size_t eval_cap = 3;
  std::vector<size_t> eval_at = {3, 5};
  eval_cmd->add_option("--claims", eval_claims, "gold claims JSONL")->required();
  eval_cmd->add_option("--results", eval_results, "pipeline results JSONL");
  eval_cmd->add_option("--run", eval_run, "run TSV for recall@k");
  eval_cmd->add_option("--verdicts", eval_verdicts, "claim verdicts JSONL");
  eval_cmd->add_option("--cap", eval_cap, "abstract-level rationale cap");
  eval_cmd->add_option("--at", eval_at, "recall cutoffs");
  eval_cmd->add_option("--report", eval_report, "write machine-readable report JSON here");

  auto* traingen_cmd = app.add_subcommand("traingen", "emit fine-tuning data for external trainers");
  add_common(traingen_cmd, common);
  std::string tg_corpus, tg_claims, tg_outdir;
  std::optional<uint64_t> tg_seed;
  std::vector<std::string> tg_stages = {"rerank", "selection", "label"};
  traingen_cmd->add_option("--corpus", tg_corpus, "corpus JSONL");
  traingen_cmd->add_option("--claims", tg_claims, "claims JSONL with gold");
  traingen_cmd->add_option("--out-dir", tg_outdir, "output directory");
  traingen_cmd->add_option("--seed", tg_seed, "RNG seed")->required();
  traingen_cmd->add_option("--stages", tg_stages, "subset of rerank selection label");

  auto* validate_cmd = app.add_subcommand("validate", "check gold annotations against the corpus");
  std::string val_corpus, val_claims;
  validate_cmd->add_option("--corpus", val_corpus, "corpus JSONL")->required();
  validate_cmd->add_option("--claims", val_claims, "claims JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (index_cmd->parsed()) return cmd_index(common, index_corpus, index_out);
    if (run_cmd->parsed()) {
      cc::PipelineConfig config = effective_config(common);
      if (!run_corpus.empty()) config.corpus_path = run_corpus;
      if (!run_claims.empty()) config.claims_path = run_claims;
      if (!run_outdir.empty()) config.output_dir = run_outdir;
      if (!run_index.empty()) config.index_path = run_index;
      if (!run_stage.empty()) config.stage = cc::pipeline_stage_from_string(run_stage);
      if (!run_stub.empty()) config.stub_table_path = run_stub;
      if (!run_label_backend.empty()) config.label_backend = run_label_backend;
      if (run_k0) config.k0 = *run_k0;
      if (run_k) config.k = *run_k;
      if (run_threshold) config.selection_threshold = *run_threshold;
      if (run_cap) config.selection_cap = *run_cap;
      if (run_claim_level) config.claim_level = true;
      if (config.corpus_path.empty() || config.claims_path.empty())
        throw cc::ConfigError("run needs --corpus and --claims (or config file paths)");
      return cmd_run(common, std::move(config));
    }
    if (eval_cmd->parsed())
      return cmd_evaluate(common, eval_claims, eval_results, eval_run, eval_verdicts, eval_cap,
                          eval_at, eval_report);
    if (traingen_cmd->parsed()) {
      cc::PipelineConfig config = effective_config(common);
      if (!tg_corpus.empty()) config.corpus_path = tg_corpus;
      if (!tg_claims.empty()) config.claims_path = tg_claims;
      if (!tg_outdir.empty()) config.output_dir = tg_outdir;
      if (tg_seed) config.traingen.seed = *tg_seed;
      if (config.corpus_path.empty() || config.claims_path.empty())
        throw cc::ConfigError("traingen needs --corpus and --claims");
      return cmd_traingen(common, std::move(config), tg_stages);
    }
    if (validate_cmd->parsed()) return cmd_validate(val_corpus, val_claims);
  } catch (const cc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cc::GatewayUnavailable& e) {
    std::cerr << "backend unavailable: " << e.what() << "\n";
    return kExitBackend;
  } catch (const cc::ProtocolError& e) {
    std::cerr << "backend protocol error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const cc::IntegrityError& e) {
    std::cerr << "data integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const cc::LookupError& e) {
    std::cerr << "data integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const cc::EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitIntegrity;
  }
  return kExitOk;
}
