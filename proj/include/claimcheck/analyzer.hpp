#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace claimcheck {

// Lucene-style English analysis chain: alphanumeric tokenization, ASCII
// lowercasing, stopword removal, Porter stemming. Each stage can be toggled
// so experiments (and fixtures) can pin simpler behaviour.
class Analyzer {
 public:
  struct Options {
    bool lowercase = true;
    bool remove_stopwords = true;
    bool stem = true;
    bool operator==(const Options&) const = default;
  };

  Analyzer() : Analyzer(Options{}) {}
  explicit Analyzer(Options options);

  std::vector<std::string> analyze(const std::string& text) const;

  const Options& options() const { return options_; }

  // The classic Lucene English stopword set.
  static const std::unordered_set<std::string>& english_stopwords();

 private:
  Options options_;
};

}  // namespace claimcheck
