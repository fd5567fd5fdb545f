#include <doctest.h>

#include <random>

#include "claimcheck/errors.hpp"
#include "claimcheck/labelling.hpp"
#include "testutil.hpp"

using namespace claimcheck;

TEST_CASE("serialize_label_input matches the template exactly") {
  const Claim claim = testutil::make_claim(1, "C");
  CHECK(serialize_label_input(claim, {}) == "hypothesis: C");
  CHECK(serialize_label_input(claim, {"A"}) == "hypothesis: C sentence1: A");
  CHECK(serialize_label_input(claim, {"A", "B"}) == "hypothesis: C sentence1: A sentence2: B");
}

TEST_CASE("argmax_label maps probabilities to labels with fixed tie order") {
  CHECK(argmax_label({0.8, 0.1, 0.1}) == Label::Supports);
  CHECK(argmax_label({0.1, 0.2, 0.7}) == Label::Refutes);
  CHECK(argmax_label({0.1, 0.7, 0.2}) == Label::NoInfo);
  // ties: Supports > NoInfo > Refutes
  CHECK(argmax_label({1.0 / 3, 1.0 / 3, 1.0 / 3}) == Label::Supports);
  CHECK(argmax_label({0.2, 0.4, 0.4}) == Label::NoInfo);
  CHECK(argmax_label({0.4, 0.2, 0.4}) == Label::Supports);
}

TEST_CASE("argmax is invariant under positive scaling") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 200; ++round) {
    LabelProbs probs{(rng() % 1000) / 1000.0, (rng() % 1000) / 1000.0, (rng() % 1000) / 1000.0};
    const double scale = 0.001 + (rng() % 1000) / 1000.0;
    const LabelProbs scaled{probs.p_true * scale, probs.p_weak * scale, probs.p_false * scale};
    CHECK(argmax_label(probs) == argmax_label(scaled));
  }
}

namespace {

RationaleSelection selection_of(int64_t claim_id, int64_t doc_id, std::vector<KeptSentence> kept) {
  RationaleSelection selection;
  selection.claim_id = claim_id;
  selection.doc_id = doc_id;
  selection.kept = std::move(kept);
  return selection;
}

LabelPrediction prediction_of(int64_t claim_id, int64_t doc_id, Label label) {
  LabelPrediction prediction;
  prediction.claim_id = claim_id;
  prediction.doc_id = doc_id;
  prediction.label = label;
  prediction.probs = label == Label::Supports   ? LabelProbs{0.8, 0.1, 0.1}
                     : label == Label::NoInfo   ? LabelProbs{0.1, 0.8, 0.1}
                                                : LabelProbs{0.1, 0.1, 0.8};
  return prediction;
}

}  // namespace

TEST_CASE("predict_label serializes rationale sentences in index order") {
  const Claim claim = testutil::make_claim(1, "C");
  const AbstractDoc doc = testutil::make_doc(2, "t", {"s0", "s1", "s2"});
  StubPredictor predictor({0.0, 0.0, 1.0});
  predictor.set("hypothesis: C sentence1: s0 sentence2: s2", {0.9, 0.05, 0.05});
  // kept arrives score-sorted (s2 first); serialization must be index order.
  const LabelPrediction prediction =
      predict_label(predictor, claim, selection_of(1, 2, {{2, 0.9}, {0, 0.8}}), doc);
  CHECK(prediction.label == Label::Supports);
  CHECK(prediction.probs == LabelProbs{0.9, 0.05, 0.05});
}

TEST_CASE("empty selection short-circuits to NoInfo without calling the predictor") {
  const Claim claim = testutil::make_claim(1, "C");
  const AbstractDoc doc = testutil::make_doc(2, "t", {"s0"});
  struct Exploder : LabelPredictor {
    LabelProbs predict(const std::string&) const override {
      throw std::logic_error("predictor must not be called");
    }
  } exploder;
  const LabelPrediction prediction = predict_label(exploder, claim, selection_of(1, 2, {}), doc);
  CHECK(prediction.label == Label::NoInfo);
  CHECK(prediction.probs == LabelProbs{0.0, 1.0, 0.0});
}

TEST_CASE("predict_label validates selection ownership") {
  const Claim claim = testutil::make_claim(1, "C");
  const AbstractDoc doc = testutil::make_doc(2, "t", {"s0"});
  const StubPredictor predictor;
  CHECK_THROWS_AS(predict_label(predictor, claim, selection_of(9, 2, {}), doc), IntegrityError);
  CHECK_THROWS_AS(predict_label(predictor, claim, selection_of(1, 9, {}), doc), IntegrityError);
}

TEST_CASE("covid_aggregate covers the full truth table") {
  const Claim claim = testutil::make_claim(1, "C");
  const auto verdict = [&](std::vector<Label> labels, std::vector<bool> nonempty) {
    std::vector<LabelPrediction> predictions;
    std::vector<RationaleSelection> selections;
    for (size_t i = 0; i < labels.size(); ++i) {
      predictions.push_back(prediction_of(1, static_cast<int64_t>(i), labels[i]));
      selections.push_back(selection_of(1, static_cast<int64_t>(i),
                                        nonempty[i] ? std::vector<KeptSentence>{{0, 0.9995}}
                                                    : std::vector<KeptSentence>{}));
    }
    return covid_aggregate(claim, predictions, selections).label;
  };

  using L = Label;
  // 1: no abstracts at all -> empty union -> Refutes
  CHECK(verdict({}, {}) == L::Refutes);
  // 2: all selections empty -> Refutes regardless of labels
  CHECK(verdict({L::Supports, L::Supports}, {false, false}) == L::Refutes);
  // 3: non-empty union, a Supports present -> Supports
  CHECK(verdict({L::Supports, L::Refutes}, {true, true}) == L::Supports);
  // 4: non-empty union, only Refutes -> Refutes
  CHECK(verdict({L::Refutes, L::Refutes}, {true, false}) == L::Refutes);
  // 5: NoInfo maps to Refutes even with kept sentences
  CHECK(verdict({L::NoInfo}, {true}) == L::Refutes);
  // 6: NoInfo + Supports -> Supports (max rule)
  CHECK(verdict({L::NoInfo, L::Supports}, {true, true}) == L::Supports);
  // 7: Supports with empty selection still counts if another doc kept one
  CHECK(verdict({L::Supports, L::Refutes}, {false, true}) == L::Supports);
  // 8: NoInfo + Refutes -> Refutes
  CHECK(verdict({L::NoInfo, L::Refutes}, {true, true}) == L::Refutes);
}

TEST_CASE("covid_aggregate returns Supports iff union non-empty and some Supports") {
  std::mt19937_64 rng(59);
  const Claim claim = testutil::make_claim(1, "C");
  for (int round = 0; round < 200; ++round) {
    const int n = static_cast<int>(rng() % 4);
    std::vector<LabelPrediction> predictions;
    std::vector<RationaleSelection> selections;
    bool any_supports = false, any_kept = false;
    for (int i = 0; i < n; ++i) {
      const int label_pick = static_cast<int>(rng() % 3);
      const Label label = label_pick == 0   ? Label::Supports
                          : label_pick == 1 ? Label::NoInfo
                                            : Label::Refutes;
      const bool kept = rng() % 2 == 0;
      predictions.push_back(prediction_of(1, i, label));
      selections.push_back(selection_of(1, i,
                                        kept ? std::vector<KeptSentence>{{0, 1.0}}
                                             : std::vector<KeptSentence>{}));
      any_supports = any_supports || label == Label::Supports;
      any_kept = any_kept || kept;
    }
    const ClaimVerdict verdict = covid_aggregate(claim, predictions, selections);
    CHECK(verdict.label == ((any_kept && any_supports) ? Label::Supports : Label::Refutes));
    CHECK(verdict.label != Label::NoInfo);
  }
}

TEST_CASE("covid_aggregate rejects misaligned stage outputs") {
  const Claim claim = testutil::make_claim(1, "C");
  CHECK_THROWS_AS(covid_aggregate(claim, {prediction_of(1, 0, Label::Supports)}, {}),
                  IntegrityError);
  CHECK_THROWS_AS(covid_aggregate(claim, {prediction_of(2, 0, Label::Supports)},
                                  {selection_of(2, 0, {})}),
                  IntegrityError);
}

namespace {

RankedList reranked_of(int64_t claim_id, std::vector<int64_t> docs) {
  RankedList list;
  list.claim_id = claim_id;
  list.stage = RunStage::Reranked;
  double score = 1.0;
  for (int64_t d : docs) list.entries.push_back({d, score -= 0.1});
  return list;
}

}  // namespace

TEST_CASE("assemble_pipeline_output drops NoInfo abstracts") {
  const RankedList reranked = reranked_of(1, {10, 11, 12});
  const std::vector<RationaleSelection> selections = {
      selection_of(1, 10, {{0, 0.9995}}), selection_of(1, 11, {}),
      selection_of(1, 12, {{1, 0.9991}, {0, 0.99905}})};
  const std::vector<LabelPrediction> predictions = {prediction_of(1, 10, Label::Supports),
                                                    prediction_of(1, 11, Label::NoInfo),
                                                    prediction_of(1, 12, Label::Refutes)};
  const ClaimResult result = assemble_pipeline_output(reranked, selections, predictions);
  REQUIRE(result.evidence.size() == 2);
  CHECK(result.evidence[0].doc_id == 10);
  CHECK(result.evidence[0].label == Label::Supports);
  REQUIRE(result.evidence[1].rationale.size() == 2);
  CHECK(result.evidence[1].rationale[0].index == 1);
}

TEST_CASE("assemble_pipeline_output with all NoInfo yields empty evidence") {
  const RankedList reranked = reranked_of(1, {10});
  const ClaimResult result = assemble_pipeline_output(
      reranked, {selection_of(1, 10, {})}, {prediction_of(1, 10, Label::NoInfo)});
  CHECK(result.evidence.empty());
}

TEST_CASE("assemble_pipeline_output rejects misaligned stages") {
  const RankedList reranked = reranked_of(1, {10, 11});
  CHECK_THROWS_AS(assemble_pipeline_output(reranked, {selection_of(1, 10, {})},
                                           {prediction_of(1, 10, Label::Supports)}),
                  IntegrityError);
}

TEST_CASE("prediction and verdict files round-trip") {
  testutil::TempDir tmp("labelling");
  const std::vector<LabelPrediction> predictions = {prediction_of(1, 10, Label::Supports),
                                                    prediction_of(1, 11, Label::NoInfo)};
  save_predictions(predictions, tmp.path() / "pred.jsonl");
  CHECK(load_predictions(tmp.path() / "pred.jsonl") == predictions);

  std::vector<ClaimVerdict> verdicts(2);
  verdicts[0].claim_id = 1;
  verdicts[0].label = Label::Supports;
  verdicts[1].claim_id = 2;
  verdicts[1].label = Label::Refutes;
  save_verdicts(verdicts, tmp.path() / "verdicts.jsonl");
  const auto loaded = load_verdicts(tmp.path() / "verdicts.jsonl");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].label == Label::Supports);
  CHECK(loaded[1].label == Label::Refutes);
}

TEST_CASE("results files round-trip") {
  testutil::TempDir tmp("results");
  ClaimResult result;
  result.claim_id = 4;
  EvidenceResult evidence;
  evidence.doc_id = 10;
  evidence.label = Label::Refutes;
  evidence.probs = {0.05, 0.1, 0.85};
  evidence.rationale = {{0, 0.9999}};
  result.evidence.push_back(evidence);
  save_results({result}, tmp.path() / "results.jsonl");
  const auto loaded = load_results(tmp.path() / "results.jsonl");
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].claim_id == 4);
  REQUIRE(loaded[0].evidence.size() == 1);
  CHECK(loaded[0].evidence[0].label == Label::Refutes);
  CHECK(loaded[0].evidence[0].rationale == std::vector<KeptSentence>{{0, 0.9999}});
}
