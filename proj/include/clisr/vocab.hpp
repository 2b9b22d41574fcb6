#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace clisr {

/// Token-id table. Id 0 is PAD, id 1 is UNK; real tokens start at 2 and are
/// assigned by descending corpus frequency with lexicographic tie-break, so
/// the table is a pure function of (corpus, min_count).
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab() = default;

  static Vocab build(const std::vector<std::vector<std::string>>& token_lists,
                     std::size_t min_count = 1);
  // Reconstruct from the id-ordered token list (ids 2..); used by checkpoints.
  static Vocab from_tokens(std::vector<std::string> tokens);

  int id_of(const std::string& token) const;  // kUnk when absent
  const std::string& token_of(int id) const;
  bool contains(const std::string& token) const { return index_.count(token) > 0; }

  // Number of ids including PAD and UNK.
  std::size_t size() const { return tokens_.size() + 2; }
  // Tokens in id order starting at id 2.
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace clisr
