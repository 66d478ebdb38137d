#pragma once

#include "g2pia/harness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace g2pia {

enum class DatasetFormat { Gsm8kJsonl, Squad2Json, GenericQaJsonl };

DatasetFormat parse_dataset_format(const std::string& s);
std::string to_string(DatasetFormat f);

struct DatasetDescriptor {
  std::string path;
  DatasetFormat format = DatasetFormat::GenericQaJsonl;
  std::optional<int> sample_limit;  // uniform subsample when set
  uint64_t shuffle_seed = 0;
};

struct DatasetLoadStats {
  long loaded = 0;
  long skipped_unanswerable = 0;  // SQuAD2 is_impossible entries
};

/// Load and validate a dataset. Malformed records raise std::runtime_error
/// with the offending line/entry. The optional subsample is a seeded uniform
/// draw without replacement, order-stable for a fixed seed.
std::vector<QAExample> load_dataset(const DatasetDescriptor& desc,
                                    DatasetLoadStats* stats = nullptr);

/// Re-serialize to the generic JSONL format (lossless for generic datasets).
void save_generic_jsonl(const std::vector<QAExample>& examples,
                        const std::string& path);

}  // namespace g2pia
