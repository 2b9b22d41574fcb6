#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace clisr {

using StopwordSet = std::unordered_set<std::string>;

// One lowercase word per line; '#' lines and blanks ignored. An empty file
// (or empty set) disables stopword removal.
StopwordSet load_stopwords(const std::string& path);

/// Normalize raw text for tokenization:
///   1. lowercase (ASCII),
///   2. drop URLs (scheme://... and www....),
///   3. strip emoji and non-linguistic symbols (keeps letters, digits and
///      whitespace; treats common non-ASCII letter blocks as letters),
///   4. drop stopwords,
///   5. collapse whitespace.
/// May return an empty string; callers handle that case.
std::string clean_text(const std::string& raw, const StopwordSet& stopwords = {});

// Whitespace split of cleaned text.
std::vector<std::string> tokenize(const std::string& clean);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace clisr
