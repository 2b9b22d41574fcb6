#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clisr/vocab.hpp"

namespace clisr {

enum class AugmentStrategy { Deletion, Synonym, Insertion, Hybrid };

const char* strategy_name(AugmentStrategy s);
AugmentStrategy strategy_from_name(const std::string& name);

/// token -> alternative tokens. Self-mappings are dropped at load time so
/// no token ever maps to itself.
class SynonymTable {
 public:
  SynonymTable() = default;

  // File format: one entry per line, "token<TAB>syn1,syn2,...".
  static SynonymTable load(const std::string& path);
  static SynonymTable from_entries(
      const std::vector<std::pair<std::string, std::vector<std::string>>>& entries);

  const std::vector<std::string>* lookup(const std::string& token) const;
  bool empty() const { return table_.empty(); }
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> table_;
};

struct AugmentConfig {
  AugmentStrategy strategy = AugmentStrategy::Hybrid;
  double rate = 0.1;  // per-stage fraction of eligible tokens
  std::uint64_t seed = 0;
};

using TokenList = std::vector<std::string>;

/// Each token is dropped independently with probability `rate`; if that
/// deletes everything, one uniformly chosen token survives, so non-empty
/// input never produces empty output.
TokenList random_deletion(const TokenList& tokens, double rate, std::mt19937_64& rng);

/// Each token with a table entry is replaced with probability `rate` by a
/// uniformly chosen synonym; tokens without entries pass through.
TokenList synonym_replacement(const TokenList& tokens, double rate,
                              const SynonymTable& table, std::mt19937_64& rng);

/// Inserts ceil(rate * len) tokens drawn uniformly from the vocab
/// (excluding PAD/UNK) at uniform positions.
TokenList random_insertion(const TokenList& tokens, double rate, const Vocab& vocab,
                           std::mt19937_64& rng);

// One augmentation pass with the configured strategy. Hybrid is deletion
// followed by synonym replacement, each at the configured rate.
TokenList augment_once(const TokenList& tokens, const AugmentConfig& config,
                       const SynonymTable& table, const Vocab& vocab,
                       std::mt19937_64& rng);

/// The two views of one example for contrastive training: two independent
/// augmentations drawn from the same seeded stream. (v, v') of the same
/// example form the positive pair; views of different examples are the
/// in-batch negatives.
std::pair<TokenList, TokenList> make_views(const TokenList& tokens,
                                           const AugmentConfig& config,
                                           const SynonymTable& table,
                                           const Vocab& vocab);

// Process-wide count of make_views invocations; the ablation harness uses
// it to assert that the contrastive pathway is really off.
std::uint64_t make_views_call_count();
void reset_make_views_call_count();

}  // namespace clisr
