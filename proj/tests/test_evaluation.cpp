#include <doctest.h>

#include <random>

#include "claimcheck/errors.hpp"
#include "claimcheck/evaluation.hpp"
#include "claimcheck/evaluation_oracle.hpp"
#include "testutil.hpp"

using namespace claimcheck;

namespace {

// One claim (id 1) with gold evidence doc 10 (Supports, rationales {0,1} and {3}).
std::vector<Claim> one_claim_gold() {
  Claim claim = testutil::make_claim(1, "q");
  GoldAnnotation gold;
  EvidenceEntry entry;
  entry.label = Label::Supports;
  entry.rationales = {{0, 1}, {3}};
  gold.evidence.emplace(10, entry);
  gold.cited_doc_ids = {10};
  claim.gold = gold;
  return {claim};
}

PredictionMap predict_one(int64_t claim_id, int64_t doc_id, Label label, std::vector<int> indices) {
  PredictionMap map;
  PredictedAbstract pa;
  pa.label = label;
  double score = 1.0;
  for (int idx : indices) pa.rationale.push_back({idx, score -= 0.01});
  map[claim_id][doc_id] = std::move(pa);
  return map;
}

}  // namespace

TEST_CASE("gold used as its own prediction scores 1.0 everywhere") {
  const std::vector<Claim> gold = one_claim_gold();
  const PredictionMap predictions = predictions_from_gold(gold);
  const AbstractLevelReport ar = eval_abstract_level(gold, predictions);
  CHECK(ar.label_only.f1 == doctest::Approx(1.0));
  CHECK(ar.label_rationale.f1 == doctest::Approx(1.0));
  const SentenceLevelReport sr = eval_sentence_level(gold, predictions);
  CHECK(sr.selection_only.f1 == doctest::Approx(1.0));
  CHECK(sr.selection_label.f1 == doctest::Approx(1.0));
}

TEST_CASE("correct abstract with wrong label earns nothing") {
  const std::vector<Claim> gold = one_claim_gold();
  const AbstractLevelReport report =
      eval_abstract_level(gold, predict_one(1, 10, Label::Refutes, {0, 1, 3}));
  CHECK(report.predicted_pairs == 1);
  CHECK(report.correctly_labelled == 0);
  CHECK(report.correctly_rationalized == 0);
}

TEST_CASE("label credit without full rationale coverage") {
  const std::vector<Claim> gold = one_claim_gold();
  // {1} misses sentence 0 of the first set and 3 of the second.
  const AbstractLevelReport report =
      eval_abstract_level(gold, predict_one(1, 10, Label::Supports, {1}));
  CHECK(report.correctly_labelled == 1);
  CHECK(report.correctly_rationalized == 0);
}

TEST_CASE("any fully covered gold set rationalizes the pair") {
  const std::vector<Claim> gold = one_claim_gold();
  const AbstractLevelReport report =
      eval_abstract_level(gold, predict_one(1, 10, Label::Supports, {3, 7}));
  CHECK(report.correctly_labelled == 1);
  CHECK(report.correctly_rationalized == 1);
}

TEST_CASE("the rationale cap applies before containment") {
  const std::vector<Claim> gold = one_claim_gold();
  // Selection {5,6,7,0,1} with descending scores: capped to 3 -> {5,6,7},
  // which covers no gold set even though {0,1} is present uncapped.
  const AbstractLevelReport capped =
      eval_abstract_level(gold, predict_one(1, 10, Label::Supports, {5, 6, 7, 0, 1}), 3);
  CHECK(capped.correctly_rationalized == 0);
  const AbstractLevelReport uncapped =
      eval_abstract_level(gold, predict_one(1, 10, Label::Supports, {5, 6, 7, 0, 1}), 0);
  CHECK(uncapped.correctly_rationalized == 1);
}

TEST_CASE("sentence-level partial rationale coverage earns nothing") {
  Claim claim = testutil::make_claim(1, "q");
  GoldAnnotation gold;
  EvidenceEntry entry;
  entry.label = Label::Supports;
  entry.rationales = {{2, 3}};
  gold.evidence.emplace(10, entry);
  claim.gold = gold;
  const SentenceLevelReport report =
      eval_sentence_level({claim}, predict_one(1, 10, Label::Supports, {2}));
  CHECK(report.predicted_sentences == 1);
  CHECK(report.correctly_selected == 0);
}

TEST_CASE("sentence-level counts and precision on the enumerated example") {
  Claim claim = testutil::make_claim(1, "q");
  GoldAnnotation gold;
  EvidenceEntry entry;
  entry.label = Label::Supports;
  entry.rationales = {{2}, {5}};
  gold.evidence.emplace(10, entry);
  claim.gold = gold;
  // Ŝ = {2,5,7}: sentences 2 and 5 are correctly selected, 7 is noise.
  const SentenceLevelReport report =
      eval_sentence_level({claim}, predict_one(1, 10, Label::Supports, {2, 5, 7}));
  CHECK(report.predicted_sentences == 3);
  CHECK(report.correctly_selected == 2);
  CHECK(report.selection_only.precision == doctest::Approx(2.0 / 3.0));
  CHECK(report.gold_sentences == 2);
  CHECK(report.selection_only.recall == doctest::Approx(1.0));
}

TEST_CASE("wrong label keeps selection-only credit but not selection+label") {
  const std::vector<Claim> gold = one_claim_gold();
  const SentenceLevelReport report =
      eval_sentence_level(gold, predict_one(1, 10, Label::Refutes, {0, 1, 3}));
  CHECK(report.correctly_selected == 3);
  CHECK(report.correctly_labelled == 0);
  CHECK(report.selection_label.f1 == 0.0);
}

TEST_CASE("empty predictions and empty gold use the zero convention") {
  const std::vector<Claim> gold = one_claim_gold();
  const AbstractLevelReport no_pred = eval_abstract_level(gold, {});
  CHECK(no_pred.label_only.precision == 0.0);
  CHECK(no_pred.label_only.recall == 0.0);
  CHECK(!no_pred.flags.empty());

  const std::vector<Claim> no_gold = {testutil::make_claim(1, "q")};
  const AbstractLevelReport no_gold_report =
      eval_abstract_level(no_gold, predict_one(1, 10, Label::Supports, {0}));
  CHECK(no_gold_report.label_only.recall == 0.0);
  CHECK(!no_gold_report.flags.empty());
}

TEST_CASE("claims with empty gold evidence still hurt precision") {
  std::vector<Claim> gold = {testutil::make_claim(1, "q")};  // no evidence at all
  const AbstractLevelReport report =
      eval_abstract_level(gold, predict_one(1, 10, Label::Supports, {0}));
  CHECK(report.predicted_pairs == 1);
  CHECK(report.correctly_labelled == 0);
  CHECK(report.gold_pairs == 0);
}

TEST_CASE("predictions for unknown claims are an error") {
  const std::vector<Claim> gold = one_claim_gold();
  CHECK_THROWS_AS(eval_abstract_level(gold, predict_one(99, 10, Label::Supports, {0})), EvalError);
  CHECK_THROWS_AS(eval_sentence_level(gold, predict_one(99, 10, Label::Supports, {0})), EvalError);
}

TEST_CASE("NoInfo predictions are never part of the evidence set") {
  const std::vector<Claim> gold = one_claim_gold();
  const AbstractLevelReport report =
      eval_abstract_level(gold, predict_one(1, 10, Label::NoInfo, {0, 1}));
  CHECK(report.predicted_pairs == 0);
}

TEST_CASE("main evaluators equal the brute-force oracle on randomized instances") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 1000; ++round) {
    const testutil::RandomInstance instance = testutil::random_instance(rng);
    const size_t cap = 1 + rng() % 4;
    const AbstractLevelReport fast = eval_abstract_level(instance.gold, instance.predictions, cap);
    const AbstractLevelReport slow =
        brute_force_eval_abstract(instance.gold, instance.predictions, cap);
    CHECK(fast.counts_equal(slow));
    const SentenceLevelReport fast_s = eval_sentence_level(instance.gold, instance.predictions);
    const SentenceLevelReport slow_s =
        brute_force_eval_sentence(instance.gold, instance.predictions);
    CHECK(fast_s.counts_equal(slow_s));
  }
}

TEST_CASE("criterion hierarchy: the stricter F1 never exceeds the looser one") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 300; ++round) {
    const testutil::RandomInstance instance = testutil::random_instance(rng);
    const AbstractLevelReport ar = eval_abstract_level(instance.gold, instance.predictions);
    CHECK(ar.label_rationale.f1 <= ar.label_only.f1 + 1e-12);
    const SentenceLevelReport sr = eval_sentence_level(instance.gold, instance.predictions);
    CHECK(sr.selection_label.f1 <= sr.selection_only.f1 + 1e-12);
    CHECK(ar.correctly_rationalized <= ar.correctly_labelled);
    CHECK(sr.correctly_labelled <= sr.correctly_selected);
  }
}

TEST_CASE("adding a correct prediction never lowers recall") {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 200; ++round) {
    testutil::RandomInstance instance = testutil::random_instance(rng);
    // find a gold pair without a prediction
    const Claim* target_claim = nullptr;
    int64_t target_doc = -1;
    for (const Claim& claim : instance.gold) {
      if (!claim.gold) continue;
      for (const auto& [doc_id, entry] : claim.gold->evidence) {
        const auto& docs = instance.predictions[claim.claim_id];
        if (!docs.count(doc_id)) {
          target_claim = &claim;
          target_doc = doc_id;
        }
      }
    }
    if (!target_claim) continue;
    const AbstractLevelReport before = eval_abstract_level(instance.gold, instance.predictions);
    const auto& entry = target_claim->gold->evidence.at(target_doc);
    PredictedAbstract pa;
    pa.label = entry.label;
    for (int idx : entry.rationales.front()) pa.rationale.push_back({idx, 1.0});
    instance.predictions[target_claim->claim_id][target_doc] = pa;
    const AbstractLevelReport after = eval_abstract_level(instance.gold, instance.predictions);
    CHECK(after.label_only.recall >= before.label_only.recall - 1e-12);
    CHECK(after.label_rationale.recall >= before.label_rationale.recall - 1e-12);
  }
}

TEST_CASE("adding an incorrect prediction never raises precision") {
  std::mt19937_64 rng(73);
  for (int round = 0; round < 200; ++round) {
    testutil::RandomInstance instance = testutil::random_instance(rng);
    const AbstractLevelReport before = eval_abstract_level(instance.gold, instance.predictions);
    // doc 77 is never gold evidence in generated instances
    PredictedAbstract pa;
    pa.label = Label::Supports;
    pa.rationale = {{0, 0.5}};
    instance.predictions[instance.gold.front().claim_id][77] = pa;
    const AbstractLevelReport after = eval_abstract_level(instance.gold, instance.predictions);
    CHECK(after.label_only.precision <= before.label_only.precision + 1e-12);
    CHECK(after.label_rationale.precision <= before.label_rationale.precision + 1e-12);
  }
}

TEST_CASE("capping the selection never increases label+rationale recall") {
  std::mt19937_64 rng(79);
  for (int round = 0; round < 200; ++round) {
    const testutil::RandomInstance instance = testutil::random_instance(rng);
    const AbstractLevelReport capped = eval_abstract_level(instance.gold, instance.predictions, 3);
    const AbstractLevelReport uncapped =
        eval_abstract_level(instance.gold, instance.predictions, 0);
    CHECK(capped.label_rationale.recall <= uncapped.label_rationale.recall + 1e-12);
  }
}

TEST_CASE("binary claim metrics") {
  auto binary_claim = [](int64_t id, Label label) {
    Claim claim = testutil::make_claim(id, "c" + std::to_string(id));
    claim.claim_level_label = label;
    return claim;
  };
  auto verdict = [](int64_t id, Label label) {
    ClaimVerdict v;
    v.claim_id = id;
    v.label = label;
    return v;
  };

  SUBCASE("all correct") {
    const std::vector<Claim> gold = {binary_claim(1, Label::Supports),
                                     binary_claim(2, Label::Refutes)};
    const BinaryReport report =
        eval_binary_claims(gold, {verdict(1, Label::Supports), verdict(2, Label::Refutes)});
    CHECK(report.accuracy == doctest::Approx(1.0));
    CHECK(report.f1_macro == doctest::Approx(1.0));
    CHECK(report.f1_binary == doctest::Approx(1.0));
  }
  SUBCASE("single wrong prediction scores zero") {
    const std::vector<Claim> gold = {binary_claim(1, Label::Supports)};
    const BinaryReport report = eval_binary_claims(gold, {verdict(1, Label::Refutes)});
    CHECK(report.accuracy == 0.0);
  }
  SUBCASE("all-Refutes baseline accuracy equals the Refutes share") {
    std::vector<Claim> gold;
    std::vector<ClaimVerdict> predictions;
    for (int i = 0; i < 142; ++i) {
      gold.push_back(binary_claim(i, i < 41 ? Label::Supports : Label::Refutes));
      predictions.push_back(verdict(i, Label::Refutes));
    }
    const BinaryReport report = eval_binary_claims(gold, predictions);
    CHECK(report.accuracy == doctest::Approx(101.0 / 142.0));
    CHECK(report.f1_binary == report.refutes.f1);
    CHECK(report.supports.f1 == 0.0);
  }
  SUBCASE("missing prediction is an error") {
    const std::vector<Claim> gold = {binary_claim(1, Label::Supports)};
    CHECK_THROWS_AS(eval_binary_claims(gold, {}), EvalError);
  }
  SUBCASE("NoInfo verdicts are rejected") {
    const std::vector<Claim> gold = {binary_claim(1, Label::Supports)};
    CHECK_THROWS_AS(eval_binary_claims(gold, {verdict(1, Label::NoInfo)}), EvalError);
  }
}

TEST_CASE("reports serialize with all counts") {
  const std::vector<Claim> gold = one_claim_gold();
  const AbstractLevelReport report =
      eval_abstract_level(gold, predict_one(1, 10, Label::Supports, {0, 1}));
  const json obj = report_to_json(report);
  CHECK(obj.at("counts").at("predicted_pairs") == 1);
  CHECK(obj.at("counts").at("gold_pairs") == 1);
  CHECK(obj.at("label_only").contains("f1"));
}
