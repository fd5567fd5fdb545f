#include "claimcheck/corpus.hpp"

#include <algorithm>
#include <set>

#include "claimcheck/jsonl.hpp"

namespace claimcheck {

const char* label_name(Label label) {
  switch (label) {
    case Label::Supports: return "Supports";
    case Label::NoInfo: return "NoInfo";
    case Label::Refutes: return "Refutes";
  }
  return "?";
}

std::string label_to_string(Label label) {
  switch (label) {
    case Label::Supports: return "SUPPORT";
    case Label::NoInfo: return "NOT_ENOUGH_INFO";
    case Label::Refutes: return "CONTRADICT";
  }
  return "?";
}

Label label_from_string(const std::string& s) {
  if (s == "SUPPORT") return Label::Supports;
  if (s == "CONTRADICT") return Label::Refutes;
  if (s == "NOT_ENOUGH_INFO") return Label::NoInfo;
  throw ParseError("unknown label string '" + s + "'");
}

void Corpus::add(AbstractDoc doc) {
  if (docs_.count(doc.doc_id))
    throw IntegrityError("duplicate doc_id " + std::to_string(doc.doc_id));
  total_sentences_ += doc.sentences.size();
  docs_.emplace(doc.doc_id, std::move(doc));
}

const AbstractDoc& Corpus::at(int64_t doc_id) const {
  auto it = docs_.find(doc_id);
  if (it == docs_.end())
    throw LookupError("doc_id " + std::to_string(doc_id) + " not in corpus");
  return it->second;
}

Corpus load_corpus(const std::filesystem::path& path) {
  Corpus corpus;
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    AbstractDoc doc;
    doc.doc_id = require_int64(obj, "doc_id", where);
    doc.title = require_string(obj, "title", where);
    auto it = obj.find("abstract");
    if (it == obj.end() || !it->is_array())
      throw ParseError(where + ": field 'abstract' must be an array of strings");
    for (const auto& s : *it) {
      if (!s.is_string()) throw ParseError(where + ": 'abstract' entries must be strings");
      doc.sentences.push_back(s.get<std::string>());
    }
    if (doc.sentences.empty())
      throw ParseError(where + ": abstract has no sentences");
    try {
      corpus.add(std::move(doc));
    } catch (const IntegrityError& e) {
      throw IntegrityError(where + ": " + e.what());
    }
  });
  return corpus;
}

namespace {

EvidenceEntry parse_evidence_entry(const json& sets, const std::string& where) {
  EvidenceEntry entry;
  bool have_label = false;
  if (!sets.is_array()) throw ParseError(where + ": evidence value must be an array");
  for (const auto& set : sets) {
    Label label = label_from_string(require_string(set, "label", where));
    if (label == Label::NoInfo)
      throw ParseError(where + ": gold evidence cannot be labelled NOT_ENOUGH_INFO");
    if (have_label && label != entry.label)
      throw ParseError(where + ": conflicting labels within one evidence doc");
    entry.label = label;
    have_label = true;
    auto it = set.find("sentences");
    if (it == set.end() || !it->is_array())
      throw ParseError(where + ": evidence set missing 'sentences' array");
    std::vector<int> indices;
    for (const auto& idx : *it) {
      if (!idx.is_number_integer())
        throw ParseError(where + ": rationale indices must be integers");
      indices.push_back(idx.get<int>());
    }
    if (indices.empty()) throw ParseError(where + ": empty rationale set");
    std::sort(indices.begin(), indices.end());
    entry.rationales.push_back(std::move(indices));
  }
  return entry;
}

}  // namespace

std::vector<Claim> load_claims(const std::filesystem::path& path) {
  std::vector<Claim> claims;
  for_each_jsonl(path, [&](size_t line_no, const json& obj) {
    const std::string where = path.string() + ":" + std::to_string(line_no);
    Claim claim;
    claim.claim_id = require_int64(obj, "id", where);
    claim.text = require_string(obj, "claim", where);
    if (claim.text.empty()) throw ParseError(where + ": empty claim text");

    if (auto it = obj.find("label"); it != obj.end()) {
      // Claim-level binary sets carry a single verdict instead of evidence.
      claim.claim_level_label = label_from_string(require_string(obj, "label", where));
    }

    bool has_gold_fields = false;
    GoldAnnotation gold;
    if (auto it = obj.find("evidence"); it != obj.end()) {
      if (!it->is_object()) throw ParseError(where + ": 'evidence' must be an object");
      has_gold_fields = true;
      for (const auto& [doc_key, sets] : it->items()) {
        int64_t doc_id;
        try {
          size_t pos = 0;
          doc_id = std::stoll(doc_key, &pos);
          if (pos != doc_key.size()) throw std::invalid_argument(doc_key);
        } catch (const std::exception&) {
          throw ParseError(where + ": evidence doc key '" + doc_key + "' is not an integer id");
        }
        gold.evidence.emplace(doc_id, parse_evidence_entry(sets, where));
      }
    }
    if (auto it = obj.find("cited_doc_ids"); it != obj.end()) {
      if (!it->is_array()) throw ParseError(where + ": 'cited_doc_ids' must be an array");
      has_gold_fields = true;
      for (const auto& id : *it) {
        if (!id.is_number_integer())
          throw ParseError(where + ": cited_doc_ids entries must be integers");
        gold.cited_doc_ids.push_back(id.get<int64_t>());
      }
    }
    if (has_gold_fields) claim.gold = std::move(gold);
    claims.push_back(std::move(claim));
  });
  return claims;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  for (const auto& [doc_id, doc] : corpus.docs()) {
    json obj;
    obj["doc_id"] = doc_id;
    obj["title"] = doc.title;
    obj["abstract"] = doc.sentences;
    out.stream() << obj.dump() << "\n";
  }
  out.commit();
}

void save_claims(const std::vector<Claim>& claims, const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  for (const Claim& claim : claims) {
    json obj;
    obj["id"] = claim.claim_id;
    obj["claim"] = claim.text;
    if (claim.claim_level_label)
      obj["label"] = label_to_string(*claim.claim_level_label);
    if (claim.gold) {
      json evidence = json::object();
      for (const auto& [doc_id, entry] : claim.gold->evidence) {
        json sets = json::array();
        for (const auto& rationale : entry.rationales) {
          sets.push_back({{"sentences", rationale}, {"label", label_to_string(entry.label)}});
        }
        evidence[std::to_string(doc_id)] = std::move(sets);
      }
      obj["evidence"] = std::move(evidence);
      obj["cited_doc_ids"] = claim.gold->cited_doc_ids;
    }
    out.stream() << obj.dump() << "\n";
  }
  out.commit();
}

std::string ValidationIssue::describe() const {
  switch (kind) {
    case Kind::DanglingDocRef:
      return "claim " + std::to_string(claim_id) + ": doc_id " + std::to_string(doc_id) +
             " not in corpus";
    case Kind::RationaleOutOfRange:
      return "claim " + std::to_string(claim_id) + ": rationale index " +
             std::to_string(sentence_index) + " out of range for doc " + std::to_string(doc_id);
    case Kind::EvidenceNotCited:
      return "claim " + std::to_string(claim_id) + ": evidence doc " + std::to_string(doc_id) +
             " missing from cited_doc_ids";
  }
  return "?";
}

ValidationReport validate_gold(const std::vector<Claim>& claims, const Corpus& corpus) {
  ValidationReport report;
  for (const Claim& claim : claims) {
    if (!claim.gold) continue;
    const GoldAnnotation& gold = *claim.gold;
    std::set<int64_t> cited(gold.cited_doc_ids.begin(), gold.cited_doc_ids.end());
    for (int64_t doc_id : gold.cited_doc_ids) {
      if (!corpus.contains(doc_id))
        report.issues.push_back({ValidationIssue::Kind::DanglingDocRef, claim.claim_id, doc_id, -1});
    }
    for (const auto& [doc_id, entry] : gold.evidence) {
      if (!cited.count(doc_id))
        report.issues.push_back({ValidationIssue::Kind::EvidenceNotCited, claim.claim_id, doc_id, -1});
      if (!corpus.contains(doc_id)) {
        if (!cited.count(doc_id))  // avoid reporting the same missing doc twice
          report.issues.push_back({ValidationIssue::Kind::DanglingDocRef, claim.claim_id, doc_id, -1});
        continue;
      }
      const int n = static_cast<int>(corpus.at(doc_id).sentences.size());
      for (const auto& rationale : entry.rationales)
        for (int idx : rationale)
          if (idx < 0 || idx >= n)
            report.issues.push_back(
                {ValidationIssue::Kind::RationaleOutOfRange, claim.claim_id, doc_id, idx});
    }
  }
  return report;
}

LabelDistribution label_distribution(const std::vector<Claim>& claims) {
  LabelDistribution dist;
  for (const Claim& claim : claims) {
    ++dist.total;
    if (claim.claim_level_label) {
      switch (*claim.claim_level_label) {
        case Label::Supports: ++dist.supports; break;
        case Label::NoInfo: ++dist.noinfo; break;
        case Label::Refutes: ++dist.refutes; break;
      }
      continue;
    }
    std::set<Label> labels;
    if (claim.gold)
      for (const auto& [doc_id, entry] : claim.gold->evidence) labels.insert(entry.label);
    if (labels.empty()) {
      ++dist.noinfo;
      continue;
    }
    if (labels.size() > 1) ++dist.mixed_label_claims;
    // A mixed-label claim counts once per distinct label; the total counted it once.
    for (Label label : labels) {
      switch (label) {
        case Label::Supports: ++dist.supports; break;
        case Label::NoInfo: ++dist.noinfo; break;
        case Label::Refutes: ++dist.refutes; break;
      }
    }
  }
  return dist;
}

std::vector<std::string> split_sentences_heuristic(const std::string& text) {
  std::vector<std::string> sentences;
  std::string current;
  for (size_t i = 0; i < text.size(); ++i) {
    current.push_back(text[i]);
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() &&
        (text[i + 1] == ' ' || text[i + 1] == '\n' || text[i + 1] == '\t')) {
      while (i + 1 < text.size() && (text[i + 1] == ' ' || text[i + 1] == '\n' || text[i + 1] == '\t'))
        ++i;
      if (!current.empty()) sentences.push_back(current);
      current.clear();
    }
  }
  if (current.find_first_not_of(" \t\n") != std::string::npos) sentences.push_back(current);
  return sentences;
}

}  // namespace claimcheck
