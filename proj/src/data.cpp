#include "clisr/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "clisr/rng.hpp"
#include "json.hpp"

namespace clisr {

using nlohmann::json;

std::size_t EncodedExample::length() const {
  std::size_t n = 0;
  while (n < mask.size() && mask[n]) ++n;
  return n;
}

EncodedExample encode(const std::vector<std::string>& tokens, const Vocab& vocab,
                      std::size_t len) {
  if (len == 0) throw std::invalid_argument("encode: sequence length must be >= 1");
  EncodedExample ex;
  ex.ids.assign(len, Vocab::kPad);
  ex.mask.assign(len, 0);
  const std::size_t n = std::min(tokens.size(), len);
  for (std::size_t i = 0; i < n; ++i) {
    ex.ids[i] = vocab.id_of(tokens[i]);
    ex.mask[i] = 1;
  }
  if (n == 0) {
    // degenerate input: a single UNK keeps the attention support non-empty
    ex.ids[0] = Vocab::kUnk;
    ex.mask[0] = 1;
  }
  return ex;
}

RawRecord record_from_json_line(const std::string& line) {
  const json j = json::parse(line);
  RawRecord r;
  r.id = j.at("id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.label = j.at("label").get<int>();
  if (r.label != 0 && r.label != 1) {
    throw std::invalid_argument("record " + r.id + ": label must be 0 or 1");
  }
  if (j.contains("stance") && !j.at("stance").is_null()) {
    const int s = j.at("stance").get<int>();
    if (s < -1 || s > 1) {
      throw std::invalid_argument("record " + r.id + ": stance must be -1, 0 or +1");
    }
    r.stance = s;
  }
  r.domain = j.value("domain", std::string{});
  return r;
}

std::string record_to_json_line(const RawRecord& record) {
  json j;
  j["id"] = record.id;
  j["text"] = record.text;
  j["label"] = record.label;
  if (record.stance.has_value()) {
    j["stance"] = *record.stance;
  } else {
    j["stance"] = nullptr;
  }
  j["domain"] = record.domain;
  return j.dump();
}

std::vector<RawRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::vector<RawRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void write_jsonl(const std::string& path, const std::vector<RawRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& r : records) out << record_to_json_line(r) << '\n';
}

DataSplits split_dataset(const std::vector<RawRecord>& corpus, double train_ratio,
                         double val_ratio, double test_ratio, std::uint64_t seed) {
  if (std::abs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9) {
    throw std::invalid_argument("split: ratios must sum to 1");
  }
  // stratify by label, shuffle within each stratum
  std::vector<std::size_t> strata[2];
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    strata[corpus[i].label == 1 ? 1 : 0].push_back(i);
  }
  DataSplits out;
  for (auto& stratum : strata) {
    std::mt19937_64 rng(derive_seed(seed, 0x5417u, stratum.size()));
    for (std::size_t i = stratum.size(); i > 1; --i) {
      std::swap(stratum[i - 1], stratum[uniform_index(rng, i)]);
    }
    const std::size_t n = stratum.size();
    const auto n_train = static_cast<std::size_t>(std::llround(train_ratio * n));
    const auto n_val = static_cast<std::size_t>(std::llround(val_ratio * n));
    for (std::size_t i = 0; i < n; ++i) {
      const RawRecord& r = corpus[stratum[i]];
      if (i < n_train) {
        out.train.push_back(r);
      } else if (i < n_train + n_val) {
        out.val.push_back(r);
      } else {
        out.test.push_back(r);
      }
    }
  }
  if (out.train.empty() || out.val.empty() || out.test.empty()) {
    throw std::invalid_argument("split: every split must be non-empty");
  }
  return out;
}

}  // namespace clisr
