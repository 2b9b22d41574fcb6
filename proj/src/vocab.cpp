#include "clisr/vocab.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace clisr {

Vocab Vocab::build(const std::vector<std::vector<std::string>>& token_lists,
                   std::size_t min_count) {
  std::map<std::string, std::size_t> counts;  // ordered map: lexicographic ties for free
  for (const auto& list : token_lists) {
    for (const auto& tok : list) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> entries;
  entries.reserve(counts.size());
  for (auto& [tok, cnt] : counts) {
    if (cnt >= min_count) entries.emplace_back(tok, cnt);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> ordered;
  ordered.reserve(entries.size());
  for (auto& [tok, cnt] : entries) ordered.push_back(tok);
  return from_tokens(std::move(ordered));
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  Vocab v;
  v.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], static_cast<int>(i) + 2).second) {
      throw std::invalid_argument("duplicate vocab token: " + v.tokens_[i]);
    }
  }
  return v;
}

int Vocab::id_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::token_of(int id) const {
  static const std::string kPadName = "<pad>";
  static const std::string kUnkName = "<unk>";
  if (id == kPad) return kPadName;
  if (id == kUnk) return kUnkName;
  const std::size_t i = static_cast<std::size_t>(id) - 2;
  if (i >= tokens_.size()) throw std::out_of_range("vocab id out of range");
  return tokens_[i];
}

}  // namespace clisr
