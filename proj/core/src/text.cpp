#include "g2pia/text.hpp"

#include "g2pia/rng.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace g2pia {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string cur;
  for (char c : text) {
    cur.push_back(c);
    if (c == '.' || c == '?' || c == '!') {
      // trim
      const auto b = cur.find_first_not_of(" \t\n\r");
      if (b != std::string::npos) {
        sentences.push_back(cur.substr(b));
      }
      cur.clear();
    }
  }
  const auto b = cur.find_first_not_of(" \t\n\r");
  if (b != std::string::npos) {
    const auto e = cur.find_last_not_of(" \t\n\r");
    sentences.push_back(cur.substr(b, e - b + 1));
  }
  return sentences;
}

SynonymLexicon::SynonymLexicon(std::map<std::string, std::vector<std::string>> entries)
    : entries_(std::move(entries)) {
  for (const auto& [word, syns] : entries_) {
    if (syns.empty()) {
      throw std::invalid_argument("synonym lexicon maps '" + word +
                                  "' to an empty list");
    }
  }
}

SynonymLexicon SynonymLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open synonym lexicon: " + path);
  }
  std::map<std::string, std::vector<std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               ": missing tab separator");
    }
    const std::string word = line.substr(0, tab);
    std::vector<std::string> syns;
    std::stringstream ss(line.substr(tab + 1));
    std::string syn;
    while (std::getline(ss, syn, ',')) {
      if (!syn.empty()) syns.push_back(syn);
    }
    if (word.empty() || syns.empty()) {
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               ": empty head word or synonym list");
    }
    entries[word] = std::move(syns);
  }
  return SynonymLexicon(std::move(entries));
}

std::vector<std::string> SynonymLexicon::synonyms(const std::string& word) const {
  const auto it = entries_.find(word);
  if (it == entries_.end()) return {};
  std::vector<std::string> out;
  for (const auto& s : it->second) {
    if (s != word) out.push_back(s);
  }
  return out;
}

WordVectorTable::WordVectorTable(std::map<std::string, Vector> vectors, int dim,
                                 OovPolicy policy)
    : vectors_(std::move(vectors)), dim_(dim), policy_(policy) {
  for (const auto& [word, v] : vectors_) {
    if (v.size() != dim_) {
      throw std::invalid_argument("vector for '" + word + "' has wrong dimension");
    }
    if (v.norm() == 0.0) {
      throw std::invalid_argument("vector for '" + word + "' is zero");
    }
  }
}

WordVectorTable WordVectorTable::load(const std::string& path, OovPolicy policy) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open word vector table: " + path);
  }
  size_t count = 0;
  int dim = 0;
  if (!(in >> count >> dim) || dim < 1) {
    throw std::runtime_error("word vector table: bad header line");
  }
  std::map<std::string, Vector> vectors;
  for (size_t i = 0; i < count; ++i) {
    std::string word;
    if (!(in >> word)) {
      throw std::runtime_error("word vector table: truncated at entry " +
                               std::to_string(i + 1));
    }
    Vector v(dim);
    for (int j = 0; j < dim; ++j) {
      if (!(in >> v[j])) {
        throw std::runtime_error("word vector table: bad value for '" + word + "'");
      }
    }
    vectors[word] = std::move(v);
  }
  return WordVectorTable(std::move(vectors), dim, policy);
}

bool WordVectorTable::contains(const std::string& word) const {
  return vectors_.count(word) > 0;
}

std::optional<EmbeddingVector> WordVectorTable::vector_for(
    const std::string& word) const {
  const auto it = vectors_.find(word);
  if (it != vectors_.end()) {
    return EmbeddingVector(it->second);
  }
  switch (policy_) {
    case OovPolicy::Fail:
      throw std::out_of_range("word '" + word + "' not in the vector table");
    case OovPolicy::SkipWord:
      return std::nullopt;
    case OovPolicy::SubwordMean: {
      // Mean over in-vocabulary parts of the compound (split on non-letters).
      Vector sum = Vector::Zero(dim_);
      int n = 0;
      for (const auto& part : tokenize(word)) {
        const auto pit = vectors_.find(part);
        if (pit != vectors_.end()) {
          sum += pit->second;
          ++n;
        }
      }
      if (n == 0) {
        throw std::out_of_range("word '" + word +
                                "' has no in-vocabulary subwords");
      }
      return EmbeddingVector(sum / n);
    }
  }
  throw std::logic_error("unreachable");
}

CoreWords extract_core_words(const std::string& question, const PosTagger& tagger) {
  if (question.empty()) {
    throw std::invalid_argument("question must be nonempty");
  }
  const auto sentences = split_sentences(question);
  if (sentences.empty()) {
    throw ExtractionError("no sentence found", std::nullopt, std::nullopt,
                          std::nullopt);
  }
  const auto tokens = tokenize(sentences.front());
  const auto tags = tagger.tag(tokens);

  int verb = -1;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == PosTag::Verb) {
      verb = static_cast<int>(i);
      break;
    }
  }
  std::optional<std::string> subject;
  for (int i = 0; i < (verb < 0 ? static_cast<int>(tokens.size()) : verb); ++i) {
    if (tags[i] == PosTag::Noun) {
      subject = tokens[i];
      break;
    }
  }
  if (verb < 0) {
    throw ExtractionError("no verb found in first sentence", subject,
                          std::nullopt, std::nullopt);
  }
  if (!subject) {
    throw ExtractionError("no subject noun before the first verb", std::nullopt,
                          tokens[verb], std::nullopt);
  }
  std::optional<std::string> object;
  for (size_t i = verb + 1; i < tokens.size(); ++i) {
    if (tags[i] == PosTag::Noun) {
      object = tokens[i];
      break;
    }
  }
  if (!object) {
    throw ExtractionError("no object noun after the predicate", subject,
                          tokens[verb], std::nullopt);
  }
  return CoreWords{*subject, tokens[verb], *object, std::nullopt};
}

double semantic_distance(const CoreWords& a, const CoreWords& b,
                         const WordVectorTable& vecs) {
  const auto pair_distance = [&](const std::string& wa, const std::string& wb) {
    if (wa == wb) return 0.0;
    const auto va = vecs.vector_for(wa);
    const auto vb = vecs.vector_for(wb);
    if (!va || !vb) return 0.0;  // skip-word policy
    return 1.0 - cosine(*va, *vb);
  };
  double d = pair_distance(a.subject, b.subject);
  d = std::max(d, pair_distance(a.predicate, b.predicate));
  d = std::max(d, pair_distance(a.object, b.object));
  return d;
}

CoreWords sample_adversarial_corewords(const CoreWords& source,
                                       const SynonymLexicon& lexicon,
                                       const WordVectorTable& vecs, double epsilon,
                                       std::mt19937_64& rng, int max_tries) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (max_tries < 1) {
    throw std::invalid_argument("max_tries must be >= 1");
  }
  std::vector<std::string> preds = lexicon.synonyms(source.predicate);
  std::vector<std::string> objs = lexicon.synonyms(source.object);
  // Empty synonym list: keep the original word (contributes distance 0).
  if (preds.empty()) preds.push_back(source.predicate);
  if (objs.empty()) objs.push_back(source.object);

  const size_t total = preds.size() * objs.size();
  std::vector<size_t> order(total);
  std::iota(order.begin(), order.end(), size_t{0});
  // Fisher-Yates; gives uniform sampling without replacement over pairs.
  for (size_t i = total - 1; i > 0; --i) {
    const size_t j = uniform_u64(rng, i + 1);
    std::swap(order[i], order[j]);
  }

  CoreWords best = source;
  double best_distance = std::numeric_limits<double>::infinity();
  const size_t budget = std::min<size_t>(total, static_cast<size_t>(max_tries));
  for (size_t t = 0; t < budget; ++t) {
    CoreWords cand{source.subject, preds[order[t] / objs.size()],
                   objs[order[t] % objs.size()], std::nullopt};
    const double d = semantic_distance(source, cand, vecs);
    if (d < best_distance) {
      best = cand;
      best_distance = d;
    }
    if (d < epsilon) {
      cand.random_number = uniform_int(rng, 10, 100);
      return cand;
    }
  }
  best.random_number = uniform_int(rng, 10, 100);
  throw SearchFailure("no synonym candidate under epsilon=" +
                          std::to_string(epsilon) + " within the try budget",
                      best, best_distance);
}

}  // namespace g2pia
