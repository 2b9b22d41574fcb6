#include "clisr/augment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "clisr/rng.hpp"

namespace clisr {

const char* strategy_name(AugmentStrategy s) {
  switch (s) {
    case AugmentStrategy::Deletion: return "deletion";
    case AugmentStrategy::Synonym: return "synonym";
    case AugmentStrategy::Insertion: return "insertion";
    case AugmentStrategy::Hybrid: return "hybrid";
  }
  return "?";
}

AugmentStrategy strategy_from_name(const std::string& name) {
  if (name == "deletion") return AugmentStrategy::Deletion;
  if (name == "synonym") return AugmentStrategy::Synonym;
  if (name == "insertion") return AugmentStrategy::Insertion;
  if (name == "hybrid") return AugmentStrategy::Hybrid;
  throw std::invalid_argument("unknown augmentation strategy: " + name);
}

SynonymTable SynonymTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synonym file: " + path);
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("synonym file " + path + ": missing TAB in line: " + line);
    }
    std::vector<std::string> syns;
    std::istringstream rest(line.substr(tab + 1));
    std::string syn;
    while (std::getline(rest, syn, ',')) {
      if (!syn.empty()) syns.push_back(syn);
    }
    entries.emplace_back(line.substr(0, tab), std::move(syns));
  }
  return from_entries(entries);
}

SynonymTable SynonymTable::from_entries(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
  SynonymTable t;
  for (const auto& [token, syns] : entries) {
    std::vector<std::string> filtered;
    for (const auto& s : syns) {
      if (s != token) filtered.push_back(s);  // never map a token to itself
    }
    if (filtered.empty()) continue;
    auto [it, fresh] = t.table_.emplace(token, std::move(filtered));
    if (!fresh) {
      throw std::invalid_argument("duplicate synonym entry: " + token);
    }
  }
  return t;
}

const std::vector<std::string>* SynonymTable::lookup(const std::string& token) const {
  auto it = table_.find(token);
  return it == table_.end() ? nullptr : &it->second;
}

TokenList random_deletion(const TokenList& tokens, double rate, std::mt19937_64& rng) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (u01(rng) >= rate) out.push_back(tok);
  }
  if (out.empty() && !tokens.empty()) {
    out.push_back(tokens[uniform_index(rng, tokens.size())]);
  }
  return out;
}

TokenList synonym_replacement(const TokenList& tokens, double rate,
                              const SynonymTable& table, std::mt19937_64& rng) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const auto* syns = table.lookup(tok);
    if (syns != nullptr && u01(rng) < rate) {
      out.push_back((*syns)[uniform_index(rng, syns->size())]);
    } else {
      out.push_back(tok);
    }
  }
  return out;
}

TokenList random_insertion(const TokenList& tokens, double rate, const Vocab& vocab,
                           std::mt19937_64& rng) {
  const std::size_t n_insert =
      static_cast<std::size_t>(std::ceil(rate * static_cast<double>(tokens.size())));
  TokenList out = tokens;
  if (n_insert == 0) return out;
  if (vocab.tokens().empty()) {
    throw std::invalid_argument("random_insertion: vocab has no real tokens");
  }
  for (std::size_t k = 0; k < n_insert; ++k) {
    const std::string& tok =
        vocab.tokens()[uniform_index(rng, vocab.tokens().size())];
    const std::size_t pos = uniform_index(rng, out.size() + 1);
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), tok);
  }
  return out;
}

TokenList augment_once(const TokenList& tokens, const AugmentConfig& config,
                       const SynonymTable& table, const Vocab& vocab,
                       std::mt19937_64& rng) {
  switch (config.strategy) {
    case AugmentStrategy::Deletion:
      return random_deletion(tokens, config.rate, rng);
    case AugmentStrategy::Synonym:
      return synonym_replacement(tokens, config.rate, table, rng);
    case AugmentStrategy::Insertion:
      return random_insertion(tokens, config.rate, vocab, rng);
    case AugmentStrategy::Hybrid: {
      TokenList deleted = random_deletion(tokens, config.rate, rng);
      return synonym_replacement(deleted, config.rate, table, rng);
    }
  }
  throw std::logic_error("augment_once: unreachable");
}

namespace {
std::atomic<std::uint64_t> g_make_views_calls{0};
}

std::pair<TokenList, TokenList> make_views(const TokenList& tokens,
                                           const AugmentConfig& config,
                                           const SynonymTable& table,
                                           const Vocab& vocab) {
  g_make_views_calls.fetch_add(1);
  std::mt19937_64 rng(config.seed);
  TokenList v = augment_once(tokens, config, table, vocab, rng);
  TokenList v2 = augment_once(tokens, config, table, vocab, rng);
  return {std::move(v), std::move(v2)};
}

std::uint64_t make_views_call_count() { return g_make_views_calls.load(); }

void reset_make_views_call_count() { g_make_views_calls.store(0); }

}  // namespace clisr
