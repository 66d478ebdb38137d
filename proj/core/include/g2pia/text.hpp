#pragma once

#include "g2pia/geometry.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace g2pia {

/// Subject / predicate / object carrying the semantics of a question, plus the
/// optional random-number core word attached to adversarial candidates.
struct CoreWords {
  std::string subject;
  std::string predicate;
  std::string object;
  std::optional<int> random_number;

  bool operator==(const CoreWords&) const = default;
};

/// Thrown when subject/predicate/object extraction fails; carries whatever was
/// found so callers can record partial results.
class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(std::string what, std::optional<std::string> subject,
                  std::optional<std::string> predicate,
                  std::optional<std::string> object)
      : std::runtime_error(std::move(what)),
        subject(std::move(subject)),
        predicate(std::move(predicate)),
        object(std::move(object)) {}

  std::optional<std::string> subject, predicate, object;
};

enum class PosTag { Noun, Verb, Number, Other };

/// Pluggable part-of-speech interface; tags one token per input token.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<PosTag> tag(const std::vector<std::string>& tokens) const = 0;
};

/// Bundled default tagger: closed-class word lists, a small irregular-verb
/// table and suffix rules. Deterministic and dependency-free.
class HeuristicTagger : public PosTagger {
 public:
  std::vector<PosTag> tag(const std::vector<std::string>& tokens) const override;
};

/// Word -> ordered synonym list.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  explicit SynonymLexicon(std::map<std::string, std::vector<std::string>> entries);

  /// TSV format: `word<TAB>syn1,syn2,...`; `#` starts a comment line.
  static SynonymLexicon load(const std::string& path);

  /// Synonyms of `word` with the word itself filtered out; empty when absent.
  std::vector<std::string> synonyms(const std::string& word) const;

  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

enum class OovPolicy { Fail, SkipWord, SubwordMean };

/// Word -> embedding vector table (word2vec-style text format).
class WordVectorTable {
 public:
  WordVectorTable() = default;
  WordVectorTable(std::map<std::string, Vector> vectors, int dim,
                  OovPolicy policy = OovPolicy::Fail);

  /// Text format: first line `<count> <dim>`, then `word v1 ... vdim`.
  static WordVectorTable load(const std::string& path,
                              OovPolicy policy = OovPolicy::Fail);

  int dim() const { return dim_; }
  OovPolicy policy() const { return policy_; }
  void set_policy(OovPolicy p) { policy_ = p; }
  bool contains(const std::string& word) const;

  /// Vector for `word` under the configured OOV policy. Returns nullopt when
  /// the policy resolves the word to "skip"; throws std::out_of_range naming
  /// the token under the fail policy.
  std::optional<EmbeddingVector> vector_for(const std::string& word) const;

 private:
  std::map<std::string, Vector> vectors_;
  int dim_ = 0;
  OovPolicy policy_ = OovPolicy::Fail;
};

/// Lowercased word tokens of `text` (punctuation stripped, digits kept).
std::vector<std::string> tokenize(const std::string& text);

/// Split on `.?!`; returns nonempty trimmed sentences.
std::vector<std::string> split_sentences(const std::string& text);

/// First-occurring subject (first noun before the first verb), predicate
/// (first verb) and object (first noun after the predicate) of the first
/// sentence. Throws ExtractionError with partial results.
CoreWords extract_core_words(const std::string& question, const PosTagger& tagger);

/// Max over aligned core-word pairs of 1 - cos(s(w_a), s(w_b)); identical
/// tokens contribute 0 without a lookup.
double semantic_distance(const CoreWords& a, const CoreWords& b,
                         const WordVectorTable& vecs);

/// Thrown when no candidate under the distance threshold is found; carries the
/// minimum-distance candidate seen.
class SearchFailure : public std::runtime_error {
 public:
  SearchFailure(std::string what, CoreWords best, double best_distance)
      : std::runtime_error(std::move(what)),
        best(std::move(best)),
        best_distance(best_distance) {}

  CoreWords best;
  double best_distance;
};

/// Subject preserved verbatim; predicate and object replaced by uniformly
/// sampled synonyms (without replacement over pairs) until the semantic
/// distance drops below epsilon or max_tries is exhausted. The accepted
/// candidate gets a uniform random number in [10, 100].
CoreWords sample_adversarial_corewords(const CoreWords& source,
                                       const SynonymLexicon& lexicon,
                                       const WordVectorTable& vecs, double epsilon,
                                       std::mt19937_64& rng, int max_tries);

}  // namespace g2pia
