#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace claimcheck {

enum class Label { Supports, NoInfo, Refutes };

const char* label_name(Label label);

// Gold-file spelling ("SUPPORT"/"CONTRADICT"); NoInfo never appears in gold
// evidence entries, only in prediction files ("NOT_ENOUGH_INFO").
std::string label_to_string(Label label);
Label label_from_string(const std::string& s);

// One corpus record: a paper abstract pre-split into sentences. Sentence
// indices are implicit by position (0-based).
struct AbstractDoc {
  int64_t doc_id = 0;
  std::string title;
  std::vector<std::string> sentences;

  bool operator==(const AbstractDoc&) const = default;
};

class Corpus {
 public:
  // Ascending doc_id iteration order.
  using DocMap = std::map<int64_t, AbstractDoc>;

  void add(AbstractDoc doc);
  bool contains(int64_t doc_id) const { return docs_.count(doc_id) != 0; }
  const AbstractDoc& at(int64_t doc_id) const;

  const DocMap& docs() const { return docs_; }
  size_t size() const { return docs_.size(); }
  size_t total_sentences() const { return total_sentences_; }

  bool operator==(const Corpus&) const = default;

 private:
  DocMap docs_;
  size_t total_sentences_ = 0;
};

// Gold evidence for one (claim, abstract) pair: a single stance label plus
// one or more rationale sets, each a set of sentence indices that is jointly
// sufficient to justify the label.
struct EvidenceEntry {
  Label label = Label::NoInfo;
  std::vector<std::vector<int>> rationales;

  bool operator==(const EvidenceEntry&) const = default;
};

struct GoldAnnotation {
  std::map<int64_t, EvidenceEntry> evidence;
  std::vector<int64_t> cited_doc_ids;

  bool operator==(const GoldAnnotation&) const = default;
};

struct Claim {
  int64_t claim_id = 0;
  std::string text;
  std::optional<GoldAnnotation> gold;
  // Claim-level verdict for binary-labelled sets (no per-abstract evidence).
  std::optional<Label> claim_level_label;

  bool operator==(const Claim&) const = default;
};

Corpus load_corpus(const std::filesystem::path& path);
std::vector<Claim> load_claims(const std::filesystem::path& path);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
void save_claims(const std::vector<Claim>& claims, const std::filesystem::path& path);

struct ValidationIssue {
  enum class Kind { DanglingDocRef, RationaleOutOfRange, EvidenceNotCited };
  Kind kind;
  int64_t claim_id;
  int64_t doc_id;
  int sentence_index;  // only for RationaleOutOfRange
  std::string describe() const;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool clean() const { return issues.empty(); }
};

// Report-only consistency check: dangling evidence/cited doc ids, rationale
// indices beyond the referenced abstract, evidence docs missing from
// cited_doc_ids.
ValidationReport validate_gold(const std::vector<Claim>& claims, const Corpus& corpus);

struct LabelDistribution {
  size_t supports = 0;
  size_t noinfo = 0;
  size_t refutes = 0;
  size_t total = 0;  // each claim counted once
  // Claims whose evidence carries more than one distinct label; such a claim
  // increments every label it carries but the total only once.
  size_t mixed_label_claims = 0;
};

LabelDistribution label_distribution(const std::vector<Claim>& claims);

// Heuristic splitter for corpora that ship raw abstract text instead of
// pre-split sentences: breaks after . ! ? followed by whitespace. Good enough
// for ingestion; not a substitute for a proper sentence segmenter.
std::vector<std::string> split_sentences_heuristic(const std::string& text);

}  // namespace claimcheck
