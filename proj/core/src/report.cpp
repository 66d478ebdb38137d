#include "g2pia/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace g2pia {

using nlohmann::json;

json to_json(const AttackPrompt& p) {
  return json{{"clean_text", p.clean_text},
              {"injected_sentence", p.injected_sentence},
              {"insertion_position", to_string(p.position)},
              {"composed_text", p.composed_text},
              {"cos_value", p.cos_value},
              {"semantic_distance_value", p.semantic_distance_value},
              {"iterations_used", p.iterations_used},
              {"constraint_satisfied", p.constraint_satisfied}};
}

AttackPrompt attack_prompt_from_json(const json& j) {
  AttackPrompt p;
  p.clean_text = j.at("clean_text").get<std::string>();
  p.injected_sentence = j.at("injected_sentence").get<std::string>();
  p.position = parse_insertion_position(j.at("insertion_position").get<std::string>());
  p.composed_text = j.at("composed_text").get<std::string>();
  p.cos_value = j.at("cos_value").get<double>();
  p.semantic_distance_value = j.at("semantic_distance_value").get<double>();
  p.iterations_used = j.at("iterations_used").get<int>();
  p.constraint_satisfied = j.at("constraint_satisfied").get<bool>();
  return p;
}

json to_json(const AttackRecord& r) {
  return json{{"example_id", r.example_id},
              {"clean_answer", r.clean_answer},
              {"attacked_answer", r.attacked_answer},
              {"clean_correct", r.clean_correct},
              {"attacked_correct", r.attacked_correct},
              {"constraint_satisfied", r.constraint_satisfied},
              {"skipped", r.skipped},
              {"skip_reason", r.skip_reason},
              {"attack_prompt", to_json(r.prompt)}};
}

AttackRecord attack_record_from_json(const json& j) {
  AttackRecord r;
  r.example_id = j.at("example_id").get<std::string>();
  r.clean_answer = j.at("clean_answer").get<std::string>();
  r.attacked_answer = j.at("attacked_answer").get<std::string>();
  r.clean_correct = j.at("clean_correct").get<bool>();
  r.attacked_correct = j.at("attacked_correct").get<bool>();
  r.constraint_satisfied = j.at("constraint_satisfied").get<bool>();
  r.skipped = j.at("skipped").get<bool>();
  r.skip_reason = j.at("skip_reason").get<std::string>();
  r.prompt = attack_prompt_from_json(j.at("attack_prompt"));
  return r;
}

json to_json(const MetricsReport& m) {
  return json{{"a_clean", m.a_clean},
              {"a_attack", m.a_attack},
              {"asr", m.asr},
              {"a_attack_raw", m.a_attack_raw},
              {"counts",
               {{"examples", m.n_examples},
                {"skipped", m.n_skipped},
                {"clean_correct", m.n_clean_correct},
                {"attacked_correct_within_clean_correct",
                 m.n_attacked_correct_within_clean_correct}}}};
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  return out;
}

}  // namespace

void write_records_jsonl(const std::vector<AttackRecord>& records,
                         const std::string& path) {
  auto out = open_out(path);
  for (const auto& r : records) out << to_json(r).dump() << "\n";
}

std::vector<AttackRecord> read_records_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open records file: " + path);
  }
  std::vector<AttackRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(attack_record_from_json(json::parse(line)));
  }
  return out;
}

void write_attack_prompts_jsonl(const std::vector<AttackPrompt>& prompts,
                                const std::string& path) {
  auto out = open_out(path);
  for (const auto& p : prompts) out << to_json(p).dump() << "\n";
}

std::vector<AttackPrompt> read_attack_prompts_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open prompts file: " + path);
  }
  std::vector<AttackPrompt> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(attack_prompt_from_json(json::parse(line)));
  }
  return out;
}

void write_metrics_json(const MetricsReport& m, const json& config,
                        const std::string& path) {
  auto out = open_out(path);
  out << json{{"config", config}, {"metrics", to_json(m)}}.dump(2) << "\n";
}

void write_sweep_csv(const std::vector<SweepCell>& grid, const std::string& path) {
  auto out = open_out(path);
  out << "epsilon,gamma,a_clean,a_attack,asr\n";
  for (const auto& cell : grid) {
    std::ostringstream row;
    row << std::setprecision(17) << cell.epsilon << ',' << cell.gamma << ','
        << cell.metrics.a_clean << ',' << cell.metrics.a_attack << ','
        << cell.metrics.asr;
    out << row.str() << "\n";
  }
}

void write_sweep_json(const std::vector<SweepCell>& grid, const json& config,
                      const std::string& path) {
  json cells = json::array();
  for (const auto& cell : grid) {
    cells.push_back(json{{"epsilon", cell.epsilon},
                         {"gamma", cell.gamma},
                         {"metrics", to_json(cell.metrics)}});
  }
  auto out = open_out(path);
  out << json{{"config", config}, {"grid", cells}}.dump(2) << "\n";
}

void write_transfer_json(const std::vector<TransferCell>& cells,
                         const json& config, const std::string& path) {
  json arr = json::array();
  for (const auto& cell : cells) {
    arr.push_back(json{{"attacker", cell.attacker},
                       {"defender", cell.defender},
                       {"metrics", to_json(cell.metrics)}});
  }
  auto out = open_out(path);
  out << json{{"config", config}, {"cells", arr}}.dump(2) << "\n";
}

}  // namespace g2pia
