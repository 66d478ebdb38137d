#include "g2pia/dataset.hpp"

#include "g2pia/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>

namespace g2pia {

using nlohmann::json;

DatasetFormat parse_dataset_format(const std::string& s) {
  if (s == "gsm8k_jsonl") return DatasetFormat::Gsm8kJsonl;
  if (s == "squad2_json") return DatasetFormat::Squad2Json;
  if (s == "generic_qa_jsonl") return DatasetFormat::GenericQaJsonl;
  throw std::invalid_argument("unknown dataset format: " + s);
}

std::string to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::Gsm8kJsonl:
      return "gsm8k_jsonl";
    case DatasetFormat::Squad2Json:
      return "squad2_json";
    case DatasetFormat::GenericQaJsonl:
      return "generic_qa_jsonl";
  }
  return "generic_qa_jsonl";
}

namespace {

[[noreturn]] void load_error(const std::string& path, long line,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<QAExample> load_jsonl(const DatasetDescriptor& desc, bool gsm8k) {
  std::ifstream in(desc.path);
  if (!in) {
    throw std::runtime_error("cannot open dataset: " + desc.path);
  }
  std::vector<QAExample> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      load_error(desc.path, lineno, e.what());
    }
    QAExample ex;
    if (gsm8k) {
      if (!j.contains("question") || !j.contains("answer")) {
        load_error(desc.path, lineno, "gsm8k record needs question and answer");
      }
      ex.id = j.value("id", std::to_string(lineno));
      ex.question = j["question"].get<std::string>();
      ex.gold_answer = j["answer"].get<std::string>();
      ex.answer_mode = AnswerMode::NumericFinal;
    } else {
      if (!j.contains("question") || !j.contains("answer")) {
        load_error(desc.path, lineno, "generic record needs question and answer");
      }
      ex.id = j.contains("id") ? j["id"].get<std::string>()
                               : std::to_string(lineno);
      ex.question = j["question"].get<std::string>();
      ex.gold_answer = j["answer"].get<std::string>();
      const std::string mode = j.value("mode", "numeric_final");
      if (mode == "numeric_final") {
        ex.answer_mode = AnswerMode::NumericFinal;
      } else if (mode == "normalized_string") {
        ex.answer_mode = AnswerMode::NormalizedString;
      } else {
        load_error(desc.path, lineno, "unknown answer mode: " + mode);
      }
    }
    if (ex.question.empty() || ex.gold_answer.empty()) {
      load_error(desc.path, lineno, "empty question or answer");
    }
    if (ex.answer_mode == AnswerMode::NumericFinal) {
      try {
        canonical_gold(ex.gold_answer, ex.answer_mode);
      } catch (const std::invalid_argument& e) {
        load_error(desc.path, lineno, e.what());
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<QAExample> load_squad2(const DatasetDescriptor& desc,
                                   DatasetLoadStats* stats) {
  std::ifstream in(desc.path);
  if (!in) {
    throw std::runtime_error("cannot open dataset: " + desc.path);
  }
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw std::runtime_error(desc.path + ": " + e.what());
  }
  std::vector<QAExample> out;
  for (const auto& article : root.at("data")) {
    for (const auto& paragraph : article.at("paragraphs")) {
      for (const auto& qa : paragraph.at("qas")) {
        if (qa.value("is_impossible", false) || qa.at("answers").empty()) {
          if (stats) ++stats->skipped_unanswerable;
          continue;
        }
        QAExample ex;
        ex.id = qa.value("id", std::to_string(out.size() + 1));
        ex.question = qa.at("question").get<std::string>();
        ex.gold_answer = qa.at("answers")[0].at("text").get<std::string>();
        ex.answer_mode = AnswerMode::NormalizedString;
        if (ex.question.empty() || ex.gold_answer.empty()) continue;
        out.push_back(std::move(ex));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<QAExample> load_dataset(const DatasetDescriptor& desc,
                                    DatasetLoadStats* stats) {
  std::vector<QAExample> out;
  switch (desc.format) {
    case DatasetFormat::Gsm8kJsonl:
      out = load_jsonl(desc, /*gsm8k=*/true);
      break;
    case DatasetFormat::GenericQaJsonl:
      out = load_jsonl(desc, /*gsm8k=*/false);
      break;
    case DatasetFormat::Squad2Json:
      out = load_squad2(desc, stats);
      break;
  }
  // unique ids
  {
    std::vector<std::string> ids;
    ids.reserve(out.size());
    for (const auto& ex : out) ids.push_back(ex.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw std::runtime_error(desc.path + ": duplicate example ids");
    }
  }
  if (desc.sample_limit && static_cast<size_t>(*desc.sample_limit) < out.size()) {
    // Seeded partial Fisher-Yates draw, then original order restored.
    std::mt19937_64 rng(desc.shuffle_seed);
    std::vector<size_t> idx(out.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    const size_t k = static_cast<size_t>(*desc.sample_limit);
    for (size_t i = 0; i < k; ++i) {
      const size_t j = i + uniform_u64(rng, idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<QAExample> sampled;
    sampled.reserve(k);
    for (const size_t i : idx) sampled.push_back(std::move(out[i]));
    out = std::move(sampled);
  }
  if (stats) stats->loaded = static_cast<long>(out.size());
  return out;
}

void save_generic_jsonl(const std::vector<QAExample>& examples,
                        const std::string& path) {
  std::ofstream outf(path);
  if (!outf) {
    throw std::runtime_error("cannot write dataset: " + path);
  }
  for (const auto& ex : examples) {
    json j{{"id", ex.id},
           {"question", ex.question},
           {"answer", ex.gold_answer},
           {"mode", ex.answer_mode == AnswerMode::NumericFinal
                        ? "numeric_final"
                        : "normalized_string"}};
    outf << j.dump() << "\n";
  }
}

}  // namespace g2pia
