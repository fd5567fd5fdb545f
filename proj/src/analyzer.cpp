#include "claimcheck/analyzer.hpp"

#include "claimcheck/porter_stemmer.hpp"

namespace claimcheck {

namespace {

// Token characters: ASCII alphanumerics plus any non-ASCII byte, so UTF-8
// words survive as opaque tokens.
bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

Analyzer::Analyzer(Options options) : options_(options) {}

const std::unordered_set<std::string>& Analyzer::english_stopwords() {
  static const std::unordered_set<std::string> kStopwords = {
      "a",    "an",   "and",  "are",   "as",   "at",   "be",   "but",  "by",
      "for",  "if",   "in",   "into",  "is",   "it",   "no",   "not",  "of",
      "on",   "or",   "such", "that",  "the",  "their", "then", "there", "these",
      "they", "this", "to",   "was",   "will", "with"};
  return kStopwords;
}

std::vector<std::string> Analyzer::analyze(const std::string& text) const {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    if (current.empty()) return;
    if (options_.lowercase)
      for (char& c : current)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (!options_.remove_stopwords || !english_stopwords().count(current)) {
      tokens.push_back(options_.stem ? porter_stem(current) : current);
    }
    current.clear();
  };
  for (unsigned char c : text) {
    if (is_token_char(c)) current.push_back(static_cast<char>(c));
    else flush();
  }
  flush();
  return tokens;
}

}  // namespace claimcheck
