#include "g2pia/generator.hpp"

#include "g2pia/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace g2pia {

namespace {

std::string replace_all_slots(std::string s, const std::string& slot,
                              const std::string& value) {
  size_t pos = 0;
  while ((pos = s.find(slot, pos)) != std::string::npos) {
    s.replace(pos, slot.size(), value);
    pos += value.size();
  }
  return s;
}

std::string first_sentence(const std::string& text) {
  const auto sentences = split_sentences(text);
  return sentences.empty() ? std::string() : sentences.front();
}

}  // namespace

InsertionPosition parse_insertion_position(const std::string& s) {
  if (s == "end") return InsertionPosition::end();
  if (s == "random") return InsertionPosition::random();
  const std::string prefix = "after_sentence:";
  if (s.rfind(prefix, 0) == 0) {
    const int k = std::stoi(s.substr(prefix.size()));
    if (k < 1) throw std::invalid_argument("after_sentence index must be >= 1");
    return InsertionPosition::after_sentence(k);
  }
  throw std::invalid_argument("bad insertion position: " + s);
}

std::string to_string(const InsertionPosition& p) {
  switch (p.kind) {
    case InsertionKind::End:
      return "end";
    case InsertionKind::Random:
      return "random";
    case InsertionKind::AfterSentence:
      return "after_sentence:" + std::to_string(p.sentence_index);
  }
  return "end";
}

EmbeddingVector MeanPooledEmbedder::embed(const std::string& text) {
  const auto tokens = tokenize(text);
  Vector sum = Vector::Zero(table_->dim());
  int n = 0;
  for (const auto& tok : tokens) {
    if (!table_->contains(tok)) continue;  // mean pooling skips OOV tokens
    sum += table_->vector_for(tok)->values();
    ++n;
  }
  if (n == 0) {
    throw std::domain_error("no in-vocabulary token to embed");
  }
  return EmbeddingVector(sum / n);
}

std::string generate_candidate_sentence(const CoreWords& core,
                                        AssistantClient& assistant,
                                        const std::string& prompt_template) {
  if (core.subject.empty() || core.predicate.empty() || core.object.empty() ||
      !core.random_number) {
    throw std::invalid_argument(
        "candidate generation requires all three core words plus the number");
  }
  std::string prompt = prompt_template;
  prompt = replace_all_slots(prompt, "{subject}", core.subject);
  prompt = replace_all_slots(prompt, "{predicate}", core.predicate);
  prompt = replace_all_slots(prompt, "{object}", core.object);
  prompt = replace_all_slots(prompt, "{number}", std::to_string(*core.random_number));

  const std::string completion = assistant.complete(prompt);
  const std::string sentence = first_sentence(completion);
  if (sentence.empty()) {
    throw std::runtime_error("assistant returned an empty completion");
  }
  return sentence;
}

std::pair<bool, double> check_cos_constraint(const std::string& t,
                                             const std::string& t_adv,
                                             TextEmbedder& embedder, double gamma,
                                             double delta) {
  if (t.empty() || t_adv.empty()) {
    throw std::invalid_argument("texts must be nonempty");
  }
  const double c = cosine(embedder.embed(t_adv), embedder.embed(t));
  return {std::abs(c - gamma) < delta, c};
}

std::string inject(const std::string& t, const std::string& t_adv,
                   const InsertionPosition& position, std::mt19937_64& rng) {
  if (t.empty() || t_adv.empty()) {
    throw std::invalid_argument("texts must be nonempty");
  }
  if (position.kind == InsertionKind::End) {
    return t + " " + t_adv;
  }
  const auto sentences = split_sentences(t);
  const int n = static_cast<int>(sentences.size());
  int k;
  if (position.kind == InsertionKind::Random) {
    k = uniform_int(rng, 1, n);
  } else {
    k = std::min(position.sentence_index, n);
  }
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += " ";
    out += sentences[i];
    if (i + 1 == k) {
      out += " " + t_adv;
    }
  }
  return out;
}

AttackPrompt search_adversarial_text(const std::string& t,
                                     const GenerationConfig& cfg,
                                     const AttackDeps& deps, std::mt19937_64& rng) {
  if (t.empty()) {
    throw std::invalid_argument("clean text must be nonempty");
  }
  const CoreWords source = extract_core_words(t, *deps.tagger);

  AttackPrompt best;
  best.clean_text = t;
  best.position = cfg.position;
  double best_gap = std::numeric_limits<double>::infinity();
  int iterations_run = 0;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    iterations_run = iter;
    CoreWords cand;
    double sem_distance;
    bool sem_ok = true;
    try {
      cand = sample_adversarial_corewords(source, *deps.lexicon, *deps.vecs,
                                          cfg.epsilon, rng, cfg.max_coreword_tries);
      sem_distance = semantic_distance(source, cand, *deps.vecs);
    } catch (const SearchFailure& f) {
      cand = f.best;
      sem_distance = f.best_distance;
      sem_ok = false;
    }

    const std::string sentence =
        generate_candidate_sentence(cand, *deps.assistant, cfg.prompt_template);
    const auto [cos_ok, cos_value] =
        check_cos_constraint(t, sentence, *deps.embedder, cfg.gamma, cfg.delta);

    const double gap2 = std::abs(cos_value - cfg.gamma);
    if (gap2 < best_gap) {
      best_gap = gap2;
      best.injected_sentence = sentence;
      best.cos_value = cos_value;
      best.semantic_distance_value = sem_distance;
      best.constraint_satisfied = false;
    }
    if (cos_ok && sem_ok) {
      best.injected_sentence = sentence;
      best.cos_value = cos_value;
      best.semantic_distance_value = sem_distance;
      best.constraint_satisfied = true;
      break;
    }
  }
  best.iterations_used = iterations_run;
  best.composed_text = inject(t, best.injected_sentence, cfg.position, rng);
  return best;
}

}  // namespace g2pia
