#include <doctest.h>

#include <set>

#include "claimcheck/traingen.hpp"
#include "testutil.hpp"

using namespace claimcheck;

namespace {

Analyzer plain_analyzer() {
  Analyzer::Options options;
  options.remove_stopwords = false;
  options.stem = false;
  return Analyzer(options);
}

// Corpus of 12 docs; claim 1 cites 1 and 2 with evidence on doc 1.
struct Fixture {
  Corpus corpus;
  std::vector<Claim> claims;
  InvertedIndex index;

  Fixture() {
    for (int64_t d = 1; d <= 12; ++d) {
      std::vector<std::string> sentences;
      for (int s = 0; s < 5; ++s)
        sentences.push_back("common filler d" + std::to_string(d) + " s" + std::to_string(s));
      corpus.add(testutil::make_doc(d, "common topic " + std::to_string(d), sentences));
    }
    Claim claim = testutil::make_claim(1, "common topic query");
    GoldAnnotation gold;
    EvidenceEntry entry;
    entry.label = Label::Supports;
    entry.rationales = {{2}};
    gold.evidence.emplace(1, entry);
    gold.cited_doc_ids = {1, 2};
    claim.gold = gold;
    claims.push_back(claim);
    index = InvertedIndex::build(corpus, plain_analyzer());
  }

  TraingenOptions options(uint64_t seed = 42) const {
    TraingenOptions o;
    o.seed = seed;
    return o;
  }
};

}  // namespace

TEST_CASE("rerank examples: one positive per cited segment plus one negative") {
  const Fixture fx;
  const TraingenResult result =
      build_rerank_examples(fx.claims, fx.corpus, fx.index, plain_analyzer(), fx.options());
  // 5-sentence docs produce one segment under the default (6,3) policy:
  // 2 cited positives + 1 negative.
  REQUIRE(result.examples.size() == 3);
  CHECK(result.examples[0].target == "true");
  CHECK(result.examples[0].doc_id == 1);
  CHECK(result.examples[1].target == "true");
  CHECK(result.examples[1].doc_id == 2);
  CHECK(result.examples[2].target == "false");
  const std::set<int64_t> cited = {1, 2};
  CHECK(!cited.count(result.examples[2].doc_id));
  for (const TrainExample& example : result.examples) {
    CHECK(example.stage == TrainStage::Rerank);
    CHECK(example.input.starts_with("Query: common topic query Document: "));
    CHECK(example.input.ends_with(" Relevant:"));
  }
}

TEST_CASE("rerank negatives are skipped when the pool is all ground truth") {
  Fixture fx;
  // cite everything retrievable so no negative remains
  std::vector<int64_t> all;
  for (int64_t d = 1; d <= 12; ++d) all.push_back(d);
  fx.claims[0].gold->cited_doc_ids = all;
  const TraingenResult result =
      build_rerank_examples(fx.claims, fx.corpus, fx.index, plain_analyzer(), fx.options());
  for (const TrainExample& example : result.examples) CHECK(example.target == "true");
  REQUIRE(result.warnings.size() == 1);
}

TEST_CASE("selection examples pair each positive with a sampled negative") {
  const Fixture fx;
  const TraingenResult result = build_selection_examples(fx.claims, fx.corpus, fx.options());
  REQUIRE(result.examples.size() == 2);
  CHECK(result.examples[0].target == "true");
  CHECK(result.examples[0].doc_id == 1);
  CHECK(result.examples[0].sentence_indices == std::vector<int>{2});
  CHECK(result.examples[1].target == "false");
  CHECK(result.examples[1].doc_id == 1);  // negatives come from evidence abstracts
  CHECK(result.examples[1].sentence_indices != std::vector<int>{2});
}

TEST_CASE("claims without evidence contribute no selection examples") {
  Fixture fx;
  fx.claims[0].gold->evidence.clear();
  CHECK(build_selection_examples(fx.claims, fx.corpus, fx.options()).examples.empty());
}

TEST_CASE("label examples serialize evidence sets and add weak examples per cited doc") {
  const Fixture fx;
  const TraingenResult result = build_label_examples(fx.claims, fx.corpus, fx.options());
  // one Supports example (evidence set {2}) + one weak per cited doc (1, 2)
  REQUIRE(result.examples.size() == 3);
  CHECK(result.examples[0].target == "true");
  CHECK(result.examples[0].input ==
        "hypothesis: common topic query sentence1: common filler d1 s2");
  CHECK(result.examples[1].target == "weak");
  CHECK(result.examples[1].doc_id == 1);
  CHECK(result.examples[2].target == "weak");
  CHECK(result.examples[2].doc_id == 2);
  for (const TrainExample& example : result.examples) {
    if (example.target != "weak") continue;
    CHECK(example.sentence_indices.size() >= 1);
    CHECK(example.sentence_indices.size() <= 2);
    // weak examples never reuse rationale sentences
    if (example.doc_id == 1)
      for (int idx : example.sentence_indices) CHECK(idx != 2);
  }
}

TEST_CASE("refuting evidence sets get target false") {
  Fixture fx;
  fx.claims[0].gold->evidence.at(1).label = Label::Refutes;
  const TraingenResult result = build_label_examples(fx.claims, fx.corpus, fx.options());
  CHECK(result.examples[0].target == "false");
}

TEST_CASE("no negative provenance collides with a positive of the same stage") {
  const Fixture fx;
  const TraingenResult result = build_selection_examples(fx.claims, fx.corpus, fx.options());
  std::set<std::pair<int64_t, int>> positives, negatives;
  for (const TrainExample& example : result.examples) {
    for (int idx : example.sentence_indices) {
      if (example.target == "true") positives.insert({example.doc_id, idx});
      else negatives.insert({example.doc_id, idx});
    }
  }
  for (const auto& negative : negatives) CHECK(!positives.count(negative));
}

TEST_CASE("generation is deterministic for a fixed seed") {
  const Fixture fx;
  for (int variant = 0; variant < 3; ++variant) {
    TraingenResult a, b;
    switch (variant) {
      case 0:
        a = build_rerank_examples(fx.claims, fx.corpus, fx.index, plain_analyzer(), fx.options(7));
        b = build_rerank_examples(fx.claims, fx.corpus, fx.index, plain_analyzer(), fx.options(7));
        break;
      case 1:
        a = build_selection_examples(fx.claims, fx.corpus, fx.options(7));
        b = build_selection_examples(fx.claims, fx.corpus, fx.options(7));
        break;
      default:
        a = build_label_examples(fx.claims, fx.corpus, fx.options(7));
        b = build_label_examples(fx.claims, fx.corpus, fx.options(7));
    }
    CHECK(a.examples == b.examples);
  }
}

TEST_CASE("different seeds eventually differ") {
  const Fixture fx;
  bool any_difference = false;
  const TraingenResult base = build_label_examples(fx.claims, fx.corpus, fx.options(1));
  for (uint64_t seed = 2; seed < 12 && !any_difference; ++seed)
    any_difference = !(build_label_examples(fx.claims, fx.corpus, fx.options(seed)).examples ==
                       base.examples);
  CHECK(any_difference);
}

TEST_CASE("saved training files are byte-stable and carry provenance") {
  testutil::TempDir tmp("traingen");
  const Fixture fx;
  const TraingenResult result = build_selection_examples(fx.claims, fx.corpus, fx.options());
  save_examples(result.examples, tmp.path() / "a.tsv", tmp.path() / "a.jsonl");
  save_examples(result.examples, tmp.path() / "b.tsv", tmp.path() / "b.jsonl");
  CHECK(testutil::read_file(tmp.path() / "a.tsv") == testutil::read_file(tmp.path() / "b.tsv"));
  CHECK(testutil::read_file(tmp.path() / "a.jsonl") == testutil::read_file(tmp.path() / "b.jsonl"));
  const std::string tsv = testutil::read_file(tmp.path() / "a.tsv");
  CHECK(tsv.find("\ttrue\n") != std::string::npos);
  CHECK(tsv.find("\tfalse\n") != std::string::npos);
}

TEST_CASE("target words always match the stage") {
  const Fixture fx;
  const auto check_targets = [](const TraingenResult& result, const std::set<std::string>& allowed) {
    for (const TrainExample& example : result.examples) CHECK(allowed.count(example.target) == 1);
  };
  check_targets(build_rerank_examples(fx.claims, fx.corpus, fx.index, plain_analyzer(), fx.options()),
                {"true", "false"});
  check_targets(build_selection_examples(fx.claims, fx.corpus, fx.options()), {"true", "false"});
  check_targets(build_label_examples(fx.claims, fx.corpus, fx.options()),
                {"true", "weak", "false"});
}

TEST_CASE("manifest records recipe and trainer hyperparameters") {
  const json manifest = traingen_manifest(TraingenOptions{});
  CHECK(manifest.at("recipe").at("negatives_topk") == 10);
  CHECK(manifest.at("external_trainer").at("rerank").at("batch_size") == 128);
  CHECK(manifest.at("external_trainer").at("selection").at("steps") == 2500);
}
