#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clisr/text.hpp"
#include "clisr/vocab.hpp"

namespace clisr {

/// One dataset record as read from disk. label: 0 real, 1 misleading.
/// stance, when present: -1 opposition, 0 neutral, +1 support.
struct RawRecord {
  std::string id;
  std::string text;
  int label = 0;
  std::optional<int> stance;
  std::string domain;
};

/// Fixed-length encoded form. mask is a true-prefix: real tokens first,
/// padding after; at least one position is always unmasked.
struct EncodedExample {
  std::vector<int> ids;
  std::vector<std::uint8_t> mask;
  int label = 0;
  std::optional<int> stance;
  std::string domain;
  std::string id;

  std::size_t length() const;  // unmasked token count
};

/// Truncate/pad a token list to exactly `len` ids. Unknown tokens map to
/// UNK; an empty list becomes [UNK, PAD, ...] with one unmasked slot so a
/// degenerate record still flows through the encoders.
EncodedExample encode(const std::vector<std::string>& tokens, const Vocab& vocab,
                      std::size_t len);

// line-delimited records: one JSON object per line with fields
// id, text, label, stance (nullable), domain
std::vector<RawRecord> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<RawRecord>& records);
RawRecord record_from_json_line(const std::string& line);  // throws on bad input
std::string record_to_json_line(const RawRecord& record);

struct DataSplits {
  std::vector<RawRecord> train, val, test;
};

/// Label-stratified deterministic split. Ratios must sum to 1 (within
/// 1e-9); throws when any resulting split would be empty.
DataSplits split_dataset(const std::vector<RawRecord>& corpus, double train_ratio,
                         double val_ratio, double test_ratio, std::uint64_t seed);

}  // namespace clisr
