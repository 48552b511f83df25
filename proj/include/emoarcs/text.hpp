#pragma once

#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emoarcs/core.hpp"
#include "emoarcs/lexicon.hpp"

namespace emoarcs {

/// What to do with tokens absent from every lexicon in the chain:
/// Skip drops them entirely; Zero lets them dilute the instance mean by
/// contributing a zero score.
enum class OOVPolicy { Skip, Zero };

inline std::string_view to_string(OOVPolicy p) {
  return p == OOVPolicy::Skip ? "skip" : "zero";
}

/// Preprocessing rule toggles. Defaults match the standard pipeline:
/// lowercase, drop URLs, drop number tokens, strip @/# markers.
struct PreprocessOptions {
  bool strip_urls = true;
  bool strip_numbers = true;
  bool strip_markers = true;
};

namespace detail {

inline bool is_url_token(std::string_view lowered) {
  return lowered.starts_with("http://") || lowered.starts_with("https://") ||
         lowered.starts_with("www.");
}

// Digits plus the punctuation that shows up inside numbers ("1,000", "3.14",
// "10:30", "50%", "$5", "1/2", "+7", "-7").
inline bool is_number_token(std::string_view token) {
  bool saw_digit = false;
  for (char c : token) {
    if (is_ascii_digit(c)) {
      saw_digit = true;
    } else if (c != '.' && c != ',' && c != ':' && c != '%' && c != '/' && c != '+' &&
               c != '-' && c != '$') {
      return false;
    }
  }
  return saw_digit;
}

inline bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace detail

/// Lowercases, removes URL tokens (http://, https://, www. up to whitespace),
/// removes tokens made solely of digits and digit punctuation, and strips
/// leading @/# markers down to bare words. Whitespace is normalized to single
/// spaces. Bytes outside ASCII pass through unchanged.
inline std::string preprocess(std::string_view raw, const PreprocessOptions& opts = {}) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t j = i;
    while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
    if (j > i) {
      std::string token = ascii_lowercase(raw.substr(i, j - i));
      if (opts.strip_markers) {
        std::size_t k = 0;
        while (k < token.size() && (token[k] == '@' || token[k] == '#')) ++k;
        token.erase(0, k);
      }
      if (opts.strip_urls && detail::is_url_token(token)) token.clear();
      if (opts.strip_numbers && !token.empty() && detail::is_number_token(token)) token.clear();
      if (!token.empty()) {
        if (!out.empty()) out.push_back(' ');
        out += token;
      }
    }
    i = j;
  }
  return out;
}

/// Splits on whitespace, strips leading/trailing ASCII punctuation from each
/// token, drops tokens that end up empty. Interior punctuation survives, so
/// contractions like "i'm" stay whole.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::size_t b = i, e = j;
      while (b < e && detail::is_ascii_punct(text[b])) ++b;
      while (e > b && detail::is_ascii_punct(text[e - 1])) --e;
      if (e > b) tokens.emplace_back(text.substr(b, e - b));
    }
    i = j;
  }
  return tokens;
}

/// Per-instance scoring result. `score` is absent exactly when the policy
/// leaves nothing to average: Skip with no in-vocabulary token, or an
/// instance with no tokens at all.
struct ScoredInstance {
  std::size_t token_count = 0;
  std::size_t in_vocab_count = 0;
  std::optional<double> score;
};

/// Scores one tokenized instance against a fallback chain.
/// Skip: mean over in-vocabulary tokens. Zero: sum of in-vocabulary scores
/// divided by the full token count, so each OOV token drags the mean toward
/// zero. For a categorical {0,1} lexicon both reduce to the fraction of
/// emotion-associated words, with the denominator set by the policy.
inline ScoredInstance score_instance(std::span<const std::string> tokens,
                                     const FallbackChain& chain, OOVPolicy policy) {
  ScoredInstance result;
  result.token_count = tokens.size();
  double sum = 0.0;
  for (const auto& token : tokens) {
    if (auto hit = chain.lookup(token)) {
      sum += hit->score;
      ++result.in_vocab_count;
    }
  }
  if (policy == OOVPolicy::Skip) {
    if (result.in_vocab_count > 0)
      result.score = sum / static_cast<double>(result.in_vocab_count);
  } else {
    if (result.token_count > 0) result.score = sum / static_cast<double>(result.token_count);
  }
  return result;
}

}  // namespace emoarcs
