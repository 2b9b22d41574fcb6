#include "clisr/text.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clisr {

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

namespace {

// Decode one UTF-8 codepoint starting at i; advances i. Malformed bytes are
// consumed one at a time and returned as U+FFFD so cleaning never throws.
char32_t decode_utf8(const std::string& s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char b0 = byte(i);
  std::size_t len = 1;
  char32_t cp = 0xFFFD;
  if (b0 < 0x80) {
    cp = b0;
  } else if ((b0 >> 5) == 0x6 && i + 1 < s.size()) {
    cp = (b0 & 0x1F) << 6 | (byte(i + 1) & 0x3F);
    len = 2;
  } else if ((b0 >> 4) == 0xE && i + 2 < s.size()) {
    cp = (b0 & 0x0F) << 12 | (byte(i + 1) & 0x3F) << 6 | (byte(i + 2) & 0x3F);
    len = 3;
  } else if ((b0 >> 3) == 0x1E && i + 3 < s.size()) {
    cp = (b0 & 0x07) << 18 | (byte(i + 1) & 0x3F) << 12 | (byte(i + 2) & 0x3F) << 6 |
         (byte(i + 3) & 0x3F);
    len = 4;
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Letters we keep: ASCII alphanumerics plus the common letter blocks.
// Everything else (punctuation, symbols, emoji, dingbats) is stripped.
bool keep_codepoint(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;  // Latin-1 letters
  if (cp >= 0x100 && cp <= 0x17F) return true;                           // Latin extended A
  if (cp >= 0x370 && cp <= 0x3FF) return true;                           // Greek
  if (cp >= 0x400 && cp <= 0x4FF) return true;                           // Cyrillic
  if (cp >= 0x3040 && cp <= 0x30FF) return true;                         // kana
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;                         // CJK unified
  return false;
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || cp == 0x3000;
}

bool starts_url(const std::string& s, std::size_t i) {
  auto has = [&](const char* prefix) {
    std::size_t n = 0;
    while (prefix[n]) {
      if (i + n >= s.size() || s[i + n] != prefix[n]) return false;
      ++n;
    }
    return true;
  };
  if (has("www.")) return true;
  // scheme://  with an alphabetic scheme
  std::size_t j = i;
  while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
  return j > i && j + 2 < s.size() && s[j] == ':' && s[j + 1] == '/' && s[j + 2] == '/';
}

}  // namespace

std::string clean_text(const std::string& raw, const StopwordSet& stopwords) {
  // lowercase ASCII first so URL detection and stopword lookup are uniform
  std::string lower;
  lower.reserve(raw.size());
  for (char c : raw) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  // drop URLs up to the next whitespace
  std::string nourl;
  nourl.reserve(lower.size());
  for (std::size_t i = 0; i < lower.size();) {
    if (starts_url(lower, i)) {
      while (i < lower.size() && !std::isspace(static_cast<unsigned char>(lower[i]))) ++i;
      continue;
    }
    nourl.push_back(lower[i++]);
  }

  // strip symbols/emoji, mapping strippable runs adjacent to nothing;
  // whitespace is preserved as separators
  std::string kept;
  kept.reserve(nourl.size());
  for (std::size_t i = 0; i < nourl.size();) {
    const char32_t cp = decode_utf8(nourl, i);
    if (is_space_cp(cp)) {
      kept.push_back(' ');
    } else if (keep_codepoint(cp)) {
      append_utf8(kept, cp);
    }
  }

  // stopword removal + whitespace collapse
  std::istringstream stream(kept);
  std::string word;
  std::string out;
  while (stream >> word) {
    if (!stopwords.empty() && stopwords.count(word)) continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& clean) {
  std::istringstream stream(clean);
  std::vector<std::string> tokens;
  std::string word;
  while (stream >> word) tokens.push_back(word);
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace clisr
