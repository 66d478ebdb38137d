#pragma once

#include "g2pia/generator.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace g2pia {

enum class AnswerMode { NumericFinal, NormalizedString };

struct QAExample {
  std::string id;
  std::string question;
  std::string gold_answer;
  AnswerMode answer_mode = AnswerMode::NumericFinal;
};

/// Model under attack.
class VictimClient {
 public:
  virtual ~VictimClient() = default;
  virtual std::string answer(const std::string& prompt) = 0;
};

/// Synthetic victim answering with the candidate maximizing the Gaussian
/// posterior over a finite answer set. Fully deterministic given its embedder.
class MockGaussianVictim : public VictimClient {
 public:
  MockGaussianVictim(DiscreteCandidateSet candidates,
                     std::vector<std::string> answers, CovarianceModel sigma,
                     TextEmbedder* embedder);

  std::string answer(const std::string& prompt) override;

  /// Index the victim would pick for a given embedding.
  int pick(const EmbeddingVector& x) const;

 private:
  DiscreteCandidateSet candidates_;
  std::vector<std::string> answers_;
  CovarianceModel sigma_;
  TextEmbedder* embedder_;
};

struct AttackRecord {
  std::string example_id;
  std::string clean_answer;
  std::string attacked_answer;
  bool clean_correct = false;
  bool attacked_correct = false;
  bool constraint_satisfied = false;
  bool skipped = false;
  std::string skip_reason;
  AttackPrompt prompt;
};

struct MetricsReport {
  double a_clean = 0.0;   // percent
  double a_attack = 0.0;  // percent, derived via the ASR identity
  double asr = 0.0;       // percent over the clean-correct subset
  // raw alternative: attacked-correct over all evaluated examples
  double a_attack_raw = 0.0;
  long n_examples = 0;   // evaluated (non-skipped)
  long n_skipped = 0;
  long n_clean_correct = 0;
  long n_attacked_correct_within_clean_correct = 0;
};

/// Deterministic answer judging. NumericFinal compares the last number token
/// of the prediction against the gold value (a "#### n" suffix is honored)
/// exactly as rationals; NormalizedString casefolds, strips punctuation and
/// articles, then requires equality or gold-containment.
bool match_answer(const std::string& predicted, const std::string& gold,
                  AnswerMode mode);

/// Gold answer text for a dataset record; extracts the "#### n" suffix for
/// numeric answers. Throws std::invalid_argument on unparseable numeric gold.
std::string canonical_gold(const std::string& gold, AnswerMode mode);

struct CampaignConfig {
  GenerationConfig gen;
  int workers = 1;
  uint64_t seed = 0;
};

/// Per-example: clean query, attack-prompt construction, attacked query,
/// judging. Per-example failures are recorded as skipped, never fatal.
/// `sink`, when set, is called once per record in dataset order as results
/// become contiguous.
std::vector<AttackRecord> run_campaign(
    const std::vector<QAExample>& dataset, const AttackDeps& deps,
    VictimClient& victim, const CampaignConfig& cfg,
    const std::function<void(const AttackRecord&)>& sink = nullptr);

/// Aggregate records; throws std::runtime_error when no clean-correct example
/// exists (ASR undefined).
MetricsReport compute_metrics(const std::vector<AttackRecord>& records);

struct TransferCell {
  std::string attacker;
  std::string defender;
  MetricsReport metrics;
};

/// Replays pre-generated attack prompts from each attacker model against each
/// victim. Row = attacker, column = defender.
std::vector<TransferCell> transfer_matrix(
    const std::map<std::string, std::vector<AttackPrompt>>& attack_sets,
    const std::map<std::string, VictimClient*>& victims,
    const std::vector<QAExample>& dataset);

struct SweepCell {
  double epsilon;
  double gamma;
  MetricsReport metrics;
};

/// Full epsilon x gamma cross-product with shared seeds per cell.
std::vector<SweepCell> parameter_sweep(const std::vector<QAExample>& dataset,
                                       const AttackDeps& deps,
                                       VictimClient& victim,
                                       const std::vector<double>& epsilons,
                                       const std::vector<double>& gammas,
                                       const CampaignConfig& cfg);

}  // namespace g2pia
