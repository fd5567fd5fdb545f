#include "claimcheck/retrieval.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "claimcheck/errors.hpp"
#include "claimcheck/jsonl.hpp"

namespace claimcheck {

const char* run_stage_name(RunStage stage) {
  return stage == RunStage::FirstStage ? "first-stage" : "reranked";
}

RunStage run_stage_from_string(const std::string& s) {
  if (s == "first-stage") return RunStage::FirstStage;
  if (s == "reranked") return RunStage::Reranked;
  throw ParseError("unknown run stage '" + s + "'");
}

void finalize_ranking(RankedList& list, size_t k) {
  std::sort(list.entries.begin(), list.entries.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (k > 0 && list.entries.size() > k) list.entries.resize(k);
}

RankedList retrieve(const InvertedIndex& index, const Analyzer& analyzer, const Claim& claim,
                    size_t k0, const Bm25Params& params) {
  const std::vector<std::string> query_terms = analyzer.analyze(claim.text);
  // Term-at-a-time accumulation; only docs containing a query term can score.
  std::map<int64_t, double> scores;
  std::set<std::string> seen;
  for (const std::string& term : query_terms) {
    if (!seen.insert(term).second) continue;  // weight repeats via tf below
    const auto* list = index.postings(term);
    if (!list) continue;
    const double idf = index.idf(term);
    const size_t repeats = std::count(query_terms.begin(), query_terms.end(), term);
    for (const Posting& p : *list) {
      const double norm =
          params.k1 * (1.0 - params.b +
                       params.b * index.doc_length(p.doc_id) /
                           (index.avg_doc_length() > 0 ? index.avg_doc_length() : 1.0));
      const double w = idf * p.term_frequency * (params.k1 + 1.0) / (p.term_frequency + norm);
      scores[p.doc_id] += w * static_cast<double>(repeats);
    }
  }
  RankedList result;
  result.claim_id = claim.claim_id;
  result.stage = RunStage::FirstStage;
  for (const auto& [doc_id, score] : scores)
    if (score > 0.0) result.entries.push_back({doc_id, score});
  finalize_ranking(result, k0);
  return result;
}

double recall_at_k(const std::vector<RankedList>& runs, const std::vector<Claim>& claims,
                   size_t k, RecallAveraging averaging) {
  std::map<int64_t, const RankedList*> by_claim;
  for (const RankedList& run : runs) by_claim[run.claim_id] = &run;

  size_t hits = 0, gold_total = 0;
  double macro_sum = 0.0;
  size_t macro_count = 0;
  for (const Claim& claim : claims) {
    if (!claim.gold || claim.gold->evidence.empty()) continue;
    auto it = by_claim.find(claim.claim_id);
    if (it == by_claim.end())
      throw EvalError("no run for claim " + std::to_string(claim.claim_id) +
                      " which has gold evidence");
    const RankedList& run = *it->second;
    std::set<int64_t> top;
    for (size_t i = 0; i < run.entries.size() && i < k; ++i)
      top.insert(run.entries[i].doc_id);
    size_t claim_hits = 0;
    for (const auto& [doc_id, entry] : claim.gold->evidence)
      if (top.count(doc_id)) ++claim_hits;
    hits += claim_hits;
    gold_total += claim.gold->evidence.size();
    macro_sum += static_cast<double>(claim_hits) / claim.gold->evidence.size();
    ++macro_count;
  }
  if (averaging == RecallAveraging::Micro)
    return gold_total == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / gold_total;
  return macro_count == 0 ? 0.0 : 100.0 * macro_sum / macro_count;
}

void save_run(const std::vector<RankedList>& runs, const std::filesystem::path& path) {
  AtomicFileWriter out(path);
  out.stream() << std::fixed << std::setprecision(6);
  for (const RankedList& run : runs) {
    int rank = 1;
    for (const ScoredDoc& entry : run.entries) {
      out.stream() << run.claim_id << '\t' << entry.doc_id << '\t' << rank++ << '\t'
                   << entry.score << '\t' << run_stage_name(run.stage) << '\n';
    }
  }
  out.commit();
}

std::vector<RankedList> load_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<RankedList> runs;
  std::map<int64_t, size_t> slot;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    int64_t claim_id, doc_id;
    int rank;
    double score;
    std::string stage;
    if (!(fields >> claim_id >> doc_id >> rank >> score >> stage))
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed run line");
    auto [it, inserted] = slot.emplace(claim_id, runs.size());
    if (inserted) {
      runs.push_back(RankedList{claim_id, {}, run_stage_from_string(stage)});
    }
    runs[it->second].entries.push_back({doc_id, score});
  }
  return runs;
}

}  // namespace claimcheck
