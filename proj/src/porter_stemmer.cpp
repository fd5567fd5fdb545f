#include "claimcheck/porter_stemmer.hpp"

#include <array>
#include <string_view>

namespace claimcheck {
namespace {

bool is_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }

class Stemmer {
 public:
  explicit Stemmer(std::string word) : w_(std::move(word)) {}

  std::string run() {
    if (w_.size() <= 2) return w_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w_;
  }

 private:
  std::string w_;

  bool is_consonant(size_t i) const {
    switch (w_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in the first `len` characters.
  int measure(size_t len) const {
    int m = 0;
    size_t i = 0;
    while (i < len && is_consonant(i)) ++i;
    while (i < len) {
      while (i < len && !is_consonant(i)) ++i;
      if (i >= len) break;
      ++m;
      while (i < len && is_consonant(i)) ++i;
    }
    return m;
  }

  bool has_vowel(size_t len) const {
    for (size_t i = 0; i < len; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool double_consonant_at_end(size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && is_consonant(len - 1);
  }

  // consonant-vowel-consonant ending where the final consonant is not w, x, y.
  bool cvc_at_end(size_t len) const {
    if (len < 3) return false;
    if (!is_consonant(len - 1) || is_consonant(len - 2) || !is_consonant(len - 3)) return false;
    const char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  size_t stem_len(std::string_view suffix) const { return w_.size() - suffix.size(); }

  void replace_suffix(std::string_view suffix, std::string_view replacement) {
    w_.resize(w_.size() - suffix.size());
    w_.append(replacement);
  }

  void step1a() {
    if (ends_with("sses")) replace_suffix("sses", "ss");
    else if (ends_with("ies")) replace_suffix("ies", "i");
    else if (ends_with("ss")) { /* keep */ }
    else if (ends_with("s")) replace_suffix("s", "");
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    bool removed = false;
    if (ends_with("ed") && has_vowel(stem_len("ed"))) {
      replace_suffix("ed", "");
      removed = true;
    } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
      replace_suffix("ing", "");
      removed = true;
    }
    if (!removed) return;
    if (ends_with("at")) replace_suffix("at", "ate");
    else if (ends_with("bl")) replace_suffix("bl", "ble");
    else if (ends_with("iz")) replace_suffix("iz", "ize");
    else if (double_consonant_at_end(w_.size())) {
      const char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc_at_end(w_.size())) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_len("y"))) w_.back() = 'i';
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // Porter's per-step rule: the first suffix that matches ends the step;
  // the replacement applies only when the measure condition holds.
  void apply_rules(const Rule* rules, size_t count, int min_measure) {
    for (size_t i = 0; i < count; ++i) {
      if (ends_with(rules[i].suffix)) {
        if (measure(stem_len(rules[i].suffix)) > min_measure)
          replace_suffix(rules[i].suffix, rules[i].replacement);
        return;
      }
    }
  }

  void step2() {
    // The bli->ble and logi->log rules follow the reference encodings (and
    // Lucene) rather than the published text, which had abli->able and no
    // logi rule.
    static constexpr std::array<Rule, 21> rules = {{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        {"logi", "log"},
    }};
    apply_rules(rules.data(), rules.size(), 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> rules = {{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_rules(rules.data(), rules.size(), 0);
  }

  void step4() {
    static constexpr std::array<Rule, 19> rules = {{
        {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},
        {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
        {"ent", ""},  {"ion", ""},  {"ou", ""},   {"ism", ""}, {"ate", ""},
        {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
    }};
    for (const Rule& rule : rules) {
      if (!ends_with(rule.suffix)) continue;
      const size_t len = stem_len(rule.suffix);
      if (rule.suffix == "ion") {
        // ion drops only after s or t.
        if (measure(len) > 1 && len > 0 && (w_[len - 1] == 's' || w_[len - 1] == 't'))
          replace_suffix(rule.suffix, "");
        return;
      }
      if (measure(len) > 1) replace_suffix(rule.suffix, "");
      return;
    }
  }

  void step5a() {
    if (!ends_with("e")) return;
    const size_t len = stem_len("e");
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc_at_end(len))) replace_suffix("e", "");
  }

  void step5b() {
    if (w_.size() >= 2 && w_.back() == 'l' && double_consonant_at_end(w_.size()) &&
        measure(w_.size()) > 1)
      w_.pop_back();
  }
};

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  for (char c : word)
    if (!is_lower_alpha(c)) return word;
  return Stemmer(word).run();
}

}  // namespace claimcheck
