#include "g2pia/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace g2pia {

namespace {

const std::unordered_set<std::string>& determiners() {
  static const std::unordered_set<std::string> s = {
      "a",     "an",   "the",  "this", "that",  "these", "those", "his",
      "her",   "its",  "their", "my",  "your",  "our",   "some",  "any",
      "each",  "every", "no",  "another", "both", "all"};
  return s;
}

const std::unordered_set<std::string>& auxiliaries() {
  static const std::unordered_set<std::string> s = {
      "can",  "could", "will", "would", "shall", "should", "may",  "might",
      "must", "do",    "does", "did",   "is",    "are",    "was",  "were",
      "am",   "be",    "been", "being", "has",   "have",   "had",  "cannot"};
  return s;
}

const std::unordered_set<std::string>& other_closed_class() {
  static const std::unordered_set<std::string> s = {
      // prepositions
      "in", "on", "at", "of", "for", "from", "to", "with", "by", "about", "as",
      "into", "over", "after", "before", "between", "under", "through",
      "during", "without", "within", "per", "up", "down", "off", "against",
      // conjunctions
      "and", "or", "but", "because", "so", "if", "while", "when", "than",
      "though", "although", "unless", "until", "once",
      // pronouns
      "i", "you", "he", "she", "it", "we", "they", "me", "him", "them", "us",
      "who", "whom", "whose", "what", "which", "where", "why", "how",
      "himself", "herself", "itself", "themselves", "something", "anything",
      "nothing", "everything", "someone", "anyone", "everyone",
      // common adverbs / particles
      "not", "only", "very", "also", "too", "just", "then", "there", "here",
      "now", "always", "never", "often", "usually", "again", "still", "yet",
      "many", "much", "more", "most", "less", "least", "few", "several",
      "such", "own", "same", "other", "first", "last", "next"};
  return s;
}

const std::unordered_set<std::string>& irregular_verbs() {
  static const std::unordered_set<std::string> s = {
      "ate",   "ran",    "went",  "saw",    "came",  "took",  "made",  "said",
      "got",   "gave",   "found", "told",   "bought", "brought", "thought",
      "knew",  "grew",   "drank", "drove",  "wrote", "sold",  "sat",   "spoke",
      "stood", "won",    "lost",  "left",   "kept",  "met",   "paid",  "sent",
      "spent", "built",  "broke", "chose",  "fell",  "felt",  "held",  "heard",
      "led",   "meant",  "rode",  "rose",   "slept", "swam",  "taught", "threw",
      "wore",  "began",  "flew",  "caught", "put",   "cost",  "cut",   "let",
      "set",   "hit",    "hurt",  "read",   "eat",   "run",   "go",    "see",
      "come",  "take",   "make",  "say",    "get",   "give",  "find",  "tell",
      "buy",   "bring",  "think", "know",   "grow",  "drink", "drive", "write",
      "sell",  "sit",    "speak", "stand",  "win",   "lose",  "leave", "keep",
      "meet",  "pay",    "send",  "spend",  "build", "break", "choose", "feel",
      "hold",  "hear",   "lead",  "mean",   "ride",  "sleep", "swim",  "teach",
      "throw", "wear",   "begin", "fly",    "catch"};
  return s;
}

bool is_number_token(const std::string& t) {
  if (t.empty()) return false;
  return std::all_of(t.begin(), t.end(),
                     [](unsigned char c) { return std::isdigit(c) || c == '.'; }) &&
         std::any_of(t.begin(), t.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

bool has_verb_suffix(const std::string& t) {
  const auto ends_with = [&](const char* suf) {
    const size_t n = std::char_traits<char>::length(suf);
    return t.size() > n + 2 && t.compare(t.size() - n, n, suf) == 0;
  };
  return ends_with("ing") || ends_with("ed") || ends_with("ify") ||
         ends_with("ize") || ends_with("ise");
}

}  // namespace

std::vector<PosTag> HeuristicTagger::tag(const std::vector<std::string>& tokens) const {
  std::vector<PosTag> tags(tokens.size(), PosTag::Other);
  bool expect_verb = false;   // set after an auxiliary/modal
  bool expect_noun = false;   // set after a determiner or number
  bool seen_verb = false;
  bool prev_open_noun = false;
  bool seen_open_class = false;

  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (is_number_token(t)) {
      tags[i] = PosTag::Number;
      expect_noun = true;
      expect_verb = false;
      prev_open_noun = false;
      continue;
    }
    if (determiners().count(t)) {
      expect_noun = true;
      expect_verb = false;
      prev_open_noun = false;
      continue;
    }
    if (auxiliaries().count(t)) {
      expect_verb = true;
      expect_noun = false;
      prev_open_noun = false;
      continue;
    }
    if (other_closed_class().count(t)) {
      expect_verb = false;
      expect_noun = false;
      prev_open_noun = false;
      continue;
    }

    // Open-class token: resolve noun vs verb from context.
    PosTag tag;
    if (expect_verb) {
      tag = PosTag::Verb;
    } else if (expect_noun) {
      tag = PosTag::Noun;
    } else if (irregular_verbs().count(t) && seen_open_class) {
      tag = PosTag::Verb;
    } else if (has_verb_suffix(t) && seen_open_class && !seen_verb) {
      tag = PosTag::Verb;
    } else if (prev_open_noun && !seen_verb) {
      // Bare "subject verb" pattern ("Dogs bark").
      tag = PosTag::Verb;
    } else {
      tag = PosTag::Noun;
    }
    tags[i] = tag;
    seen_verb = seen_verb || tag == PosTag::Verb;
    prev_open_noun = tag == PosTag::Noun;
    seen_open_class = true;
    expect_verb = false;
    expect_noun = false;
  }
  return tags;
}

}  // namespace g2pia
