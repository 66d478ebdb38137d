#pragma once

#include "g2pia/harness.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace g2pia {

/// Stable JSON field layout for reports and records files.
nlohmann::json to_json(const AttackPrompt& p);
AttackPrompt attack_prompt_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AttackRecord& r);
AttackRecord attack_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MetricsReport& m);

/// One AttackRecord per line.
void write_records_jsonl(const std::vector<AttackRecord>& records,
                         const std::string& path);
std::vector<AttackRecord> read_records_jsonl(const std::string& path);

void write_attack_prompts_jsonl(const std::vector<AttackPrompt>& prompts,
                                const std::string& path);
std::vector<AttackPrompt> read_attack_prompts_jsonl(const std::string& path);

/// Metrics report with the resolved run configuration embedded.
void write_metrics_json(const MetricsReport& m, const nlohmann::json& config,
                        const std::string& path);

/// CSV with header `epsilon,gamma,a_clean,a_attack,asr`.
void write_sweep_csv(const std::vector<SweepCell>& grid, const std::string& path);
void write_sweep_json(const std::vector<SweepCell>& grid,
                      const nlohmann::json& config, const std::string& path);

void write_transfer_json(const std::vector<TransferCell>& cells,
                         const nlohmann::json& config, const std::string& path);

}  // namespace g2pia
