#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emoarcs/core.hpp"

namespace emoarcs {

enum class LexiconKind { Categorical, Continuous };

inline std::string_view to_string(LexiconKind k) {
  return k == LexiconKind::Categorical ? "categorical" : "continuous";
}

/// Term normalization applied to every lexicon entry and to every lookup key:
/// ASCII lowercasing only. Idempotent, and identical across languages.
inline std::string normalize_term(std::string_view term) { return ascii_lowercase(term); }

/// Immutable term -> score table for one emotion dimension or category.
/// Categorical lexicons carry the finite label set their scores are drawn
/// from; continuous lexicons only carry the score range.
class Lexicon {
 public:
  Lexicon(std::string name, std::string emotion, LexiconKind kind, Interval score_range,
          std::unordered_map<std::string, double> entries, std::vector<double> labels = {})
      : name_(std::move(name)),
        emotion_(std::move(emotion)),
        kind_(kind),
        score_range_(score_range),
        labels_(std::move(labels)),
        entries_(std::move(entries)) {
    if (score_range_.lo > score_range_.hi)
      throw Error("lexicon '" + name_ + "': score range is empty");
    if (kind_ == LexiconKind::Categorical && labels_.empty())
      throw Error("lexicon '" + name_ + "': categorical lexicon requires a label set");
    for (const auto& [term, score] : entries_) {
      if (!score_range_.contains(score))
        throw Error("lexicon '" + name_ + "': score " + format_double(score) + " for term '" +
                    term + "' outside declared range [" + format_double(score_range_.lo) + ", " +
                    format_double(score_range_.hi) + "]");
      if (kind_ == LexiconKind::Categorical && !is_label(score))
        throw Error("lexicon '" + name_ + "': score " + format_double(score) + " for term '" +
                    term + "' is not in the declared label set");
      if (normalize_term(term) != term)
        throw Error("lexicon '" + name_ + "': term '" + term + "' is not normalized");
    }
  }

  const std::string& name() const { return name_; }
  const std::string& emotion() const { return emotion_; }
  LexiconKind kind() const { return kind_; }
  const Interval& score_range() const { return score_range_; }
  const std::vector<double>& labels() const { return labels_; }
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, double>& entries() const { return entries_; }

  std::optional<double> find(std::string_view normalized_term) const {
    auto it = entries_.find(std::string(normalized_term));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(std::string_view normalized_term) const {
    return entries_.contains(std::string(normalized_term));
  }

  /// Entries sorted by term; the deterministic view used for checksums,
  /// histograms, and serialization.
  std::vector<std::pair<std::string, double>> sorted_entries() const {
    std::vector<std::pair<std::string, double>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Content checksum over the sorted entries; equal bytes in, equal checksum out.
  std::uint64_t checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [term, score] : sorted_entries()) {
      h = fnv1a64(term, h);
      h = fnv1a64("\t", h);
      h = fnv1a64(format_double(score), h);
      h = fnv1a64("\n", h);
    }
    return h;
  }

 private:
  bool is_label(double score) const {
    return std::find(labels_.begin(), labels_.end(), score) != labels_.end();
  }

  std::string name_;
  std::string emotion_;
  LexiconKind kind_;
  Interval score_range_;
  std::vector<double> labels_;
  std::unordered_map<std::string, double> entries_;
};

/// Keeps only entries whose association magnitude exceeds min_abs_score.
/// The comparison is strict, and runs on |score| so signed valence lexicons
/// behave the same as nonnegative intensity ones.
struct ThresholdFilter {
  double min_abs_score = 0.0;
};

/// Loads a UTF-8 TSV lexicon: one `term<TAB>score` per line, `#` comments and
/// blank lines allowed. Terms are normalized on load. A duplicate term with
/// the same score is accepted with a warning; with a conflicting score it is
/// a hard error. Multi-word terms are skipped with a warning (only unigrams
/// are ever matched by the tokenizer).
inline Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind,
                            std::string emotion, Interval score_range,
                            WarningList* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file: " + path.string());

  std::vector<double> labels;
  if (kind == LexiconKind::Categorical) {
    // The label set of a categorical lexicon is the integers in its range.
    for (double v = std::ceil(score_range.lo); v <= score_range.hi; v += 1.0)
      labels.push_back(v);
    if (labels.size() < 2)
      throw Error("categorical score range [" + format_double(score_range.lo) + ", " +
                  format_double(score_range.hi) + "] admits fewer than 2 labels");
  }

  std::unordered_map<std::string, double> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": malformed line, expected term<TAB>score");
    const std::string term = normalize_term(std::string_view(line).substr(0, tab));
    if (term.empty())
      throw Error(path.string() + ":" + std::to_string(line_no) + ": empty term");
    const auto score = parse_double(std::string_view(line).substr(tab + 1));
    if (!score)
      throw Error(path.string() + ":" + std::to_string(line_no) + ": unparseable score '" +
                  line.substr(tab + 1) + "'");
    if (!score_range.contains(*score))
      throw Error(path.string() + ":" + std::to_string(line_no) + ": score " +
                  format_double(*score) + " outside declared range");
    if (term.find(' ') != std::string::npos) {
      warn(warnings, path.string() + ":" + std::to_string(line_no) +
                         ": multi-word term '" + term + "' skipped (unigrams only)");
      continue;
    }
    auto [it, inserted] = entries.emplace(term, *score);
    if (!inserted) {
      if (it->second == *score) {
        warn(warnings, path.string() + ":" + std::to_string(line_no) + ": duplicate term '" +
                           term + "' with identical score");
      } else {
        throw Error(path.string() + ":" + std::to_string(line_no) + ": duplicate term '" + term +
                    "' with conflicting score (" + format_double(it->second) + " vs " +
                    format_double(*score) + ")");
      }
    }
  }
  if (entries.empty()) throw Error(path.string() + ": no entries");

  return Lexicon(path.stem().string(), std::move(emotion), kind, score_range,
                 std::move(entries), std::move(labels));
}

inline Lexicon apply_threshold(const Lexicon& lex, ThresholdFilter filter,
                               WarningList* warnings = nullptr) {
  const double cap = std::max(std::abs(lex.score_range().lo), std::abs(lex.score_range().hi));
  if (filter.min_abs_score < 0.0 || filter.min_abs_score > cap)
    throw Error("threshold " + format_double(filter.min_abs_score) + " outside [0, " +
                format_double(cap) + "]");
  std::unordered_map<std::string, double> kept;
  for (const auto& [term, score] : lex.entries()) {
    if (std::abs(score) > filter.min_abs_score) kept.emplace(term, score);
  }
  if (kept.empty())
    warn(warnings, "lexicon '" + lex.name() + "': threshold " +
                       format_double(filter.min_abs_score) + " removed every entry");
  return Lexicon(lex.name(), lex.emotion(), lex.kind(), lex.score_range(), std::move(kept),
                 lex.labels());
}

/// Maps a continuous lexicon onto categorical labels. With cutoffs c1 < ... < ck
/// and labels l0..lk, a score lands in l0 when score <= c1, in li when
/// ci < score <= c(i+1), and in lk when score > ck.
inline Lexicon binarize(const Lexicon& lex, std::span<const double> cutoffs,
                        std::span<const double> labels) {
  if (lex.kind() != LexiconKind::Continuous)
    throw Error("binarize requires a continuous lexicon");
  if (labels.size() != cutoffs.size() + 1)
    throw Error("binarize requires len(labels) == len(cutoffs) + 1");
  for (std::size_t i = 0; i + 1 < cutoffs.size(); ++i) {
    if (!(cutoffs[i] < cutoffs[i + 1])) throw Error("cutoffs must be strictly increasing");
  }
  for (double c : cutoffs) {
    if (!lex.score_range().contains(c))
      throw Error("cutoff " + format_double(c) + " outside lexicon score range");
  }

  std::unordered_map<std::string, double> mapped;
  mapped.reserve(lex.size());
  for (const auto& [term, score] : lex.entries()) {
    // Count of cutoffs strictly below the score; a score equal to a cutoff
    // falls in the interval to its left.
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cutoffs.begin(), cutoffs.end(), score) - cutoffs.begin());
    mapped.emplace(term, labels[idx]);
  }
  const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
  return Lexicon(lex.name() + "-cat", lex.emotion(), LexiconKind::Categorical,
                 Interval{*lo, *hi}, std::move(mapped),
                 std::vector<double>(labels.begin(), labels.end()));
}

/// Ordered list of lexicons consulted in sequence; the code-switch fallback.
/// All members must share emotion and score range. Immutable; safe for
/// concurrent lookups.
class FallbackChain {
 public:
  struct Hit {
    double score;
    std::size_t source;  // index of the lexicon that supplied the score
  };

  explicit FallbackChain(std::vector<std::shared_ptr<const Lexicon>> lexicons)
      : lexicons_(std::move(lexicons)) {
    if (lexicons_.empty()) throw Error("fallback chain must contain at least one lexicon");
    for (const auto& lex : lexicons_) {
      if (lex == nullptr) throw Error("fallback chain contains a null lexicon");
      if (lex->emotion() != lexicons_.front()->emotion())
        throw Error("fallback chain mixes emotions: '" + lexicons_.front()->emotion() +
                    "' vs '" + lex->emotion() + "'");
      if (!(lex->score_range() == lexicons_.front()->score_range()))
        throw Error("fallback chain mixes score ranges");
    }
  }

  static FallbackChain single(Lexicon lex) {
    std::vector<std::shared_ptr<const Lexicon>> v;
    v.push_back(std::make_shared<const Lexicon>(std::move(lex)));
    return FallbackChain(std::move(v));
  }

  std::optional<Hit> lookup(std::string_view normalized_term) const {
    for (std::size_t i = 0; i < lexicons_.size(); ++i) {
      if (auto score = lexicons_[i]->find(normalized_term))
        return Hit{*score, i};
    }
    return std::nullopt;
  }

  std::size_t size() const { return lexicons_.size(); }
  const Lexicon& at(std::size_t i) const { return *lexicons_.at(i); }
  const std::string& emotion() const { return lexicons_.front()->emotion(); }
  const Interval& score_range() const { return lexicons_.front()->score_range(); }

 private:
  std::vector<std::shared_ptr<const Lexicon>> lexicons_;
};

}  // namespace emoarcs
