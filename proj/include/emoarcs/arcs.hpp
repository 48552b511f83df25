#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emoarcs/core.hpp"
#include "emoarcs/csv.hpp"
#include "emoarcs/lexicon.hpp"
#include "emoarcs/text.hpp"

namespace emoarcs {

/// One instance of an ordered text stream. `gold` is the human-assigned
/// emotion label when the dataset has one.
struct LabeledInstance {
  std::size_t index = 0;
  std::string text;
  std::optional<double> gold;
};

enum class BinMode { Rolling, Tumbling };

inline std::string_view to_string(BinMode m) {
  return m == BinMode::Rolling ? "rolling" : "tumbling";
}

/// Bin size B plus stepping mode. Rolling advances one instance at a time,
/// tumbling advances by B.
struct BinSpec {
  std::size_t size = 1;
  BinMode mode = BinMode::Rolling;

  friend bool operator==(const BinSpec&, const BinSpec&) = default;
};

struct ArcPoint {
  std::int64_t position = 0;  // start index of the window
  std::optional<double> value;
};

/// Ordered (position, value) series produced by binning a stream. Points are
/// carried even when missing (window with nothing scoreable) so downstream
/// evaluation can report exclusions. Rolling arcs over N instances with every
/// point present have N - B + 1 points; tumbling floor(N/B).
struct EmotionArc {
  std::vector<ArcPoint> points;
  BinSpec bin;
  bool standardized = false;

  std::size_t present_count() const {
    std::size_t n = 0;
    for (const auto& p : points) n += p.value.has_value() ? 1 : 0;
    return n;
  }

  std::vector<double> present_values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points)
      if (p.value) out.push_back(*p.value);
    return out;
  }
};

// --- dataset ingestion -------------------------------------------------------

/// Column map for CSV/TSV ingestion. With a header, columns are addressed by
/// name; without one, by 0-based index given as a decimal string. An absent
/// label_column loads an unlabeled stream. Delimiter defaults from the file
/// extension (.tsv/.tab are tab, everything else comma).
struct DatasetSchema {
  std::string text_column = "text";
  std::optional<std::string> label_column = "label";
  bool has_header = true;
  std::optional<char> delimiter;
};

namespace detail {

inline std::size_t resolve_column(const std::vector<std::string>& header,
                                  const std::string& spec, bool has_header,
                                  const std::string& role) {
  if (has_header) {
    auto it = std::find(header.begin(), header.end(), spec);
    if (it == header.end())
      throw Error("missing column '" + spec + "' (" + role + ")");
    return static_cast<std::size_t>(it - header.begin());
  }
  std::size_t idx = 0;
  for (char c : spec) {
    if (!is_ascii_digit(c))
      throw Error("column spec '" + spec + "' must be a 0-based index when the file has no header");
    idx = idx * 10 + static_cast<std::size_t>(c - '0');
  }
  return idx;
}

}  // namespace detail

inline std::vector<LabeledInstance> load_dataset(std::istream& in, const DatasetSchema& schema,
                                                 char delim, const std::string& origin) {
  CsvReader reader(in, delim);
  std::vector<std::string> row;
  std::vector<std::string> header;
  if (schema.has_header) {
    if (!reader.next(header)) throw Error(origin + ": empty file");
  }
  const std::size_t text_idx =
      detail::resolve_column(header, schema.text_column, schema.has_header, "text");
  std::optional<std::size_t> label_idx;
  if (schema.label_column)
    label_idx = detail::resolve_column(header, *schema.label_column, schema.has_header, "label");

  std::vector<LabeledInstance> instances;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    const std::size_t needed = std::max(text_idx, label_idx.value_or(0)) + 1;
    if (row.size() < needed)
      throw Error(origin + ":" + std::to_string(reader.line()) + ": row has " +
                  std::to_string(row.size()) + " fields, need at least " +
                  std::to_string(needed));
    LabeledInstance inst;
    inst.index = instances.size();
    inst.text = row[text_idx];
    if (label_idx) {
      const std::string& raw = row[*label_idx];
      if (!raw.empty()) {
        auto v = parse_double(raw);
        if (!v)
          throw Error(origin + ":" + std::to_string(reader.line()) + ": unparseable label '" +
                      raw + "'");
        inst.gold = *v;
      }
    }
    instances.push_back(std::move(inst));
  }
  if (instances.empty()) throw Error(origin + ": no instances");
  return instances;
}

inline std::vector<LabeledInstance> load_dataset(const std::filesystem::path& path,
                                                 const DatasetSchema& schema = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset file: " + path.string());
  const char delim = schema.delimiter.value_or(delimiter_for_path(path));
  return load_dataset(in, schema, delim, path.string());
}

/// Stable ascending sort by gold label, reindexed 0..N-1. Every instance must
/// carry a gold label.
inline std::vector<LabeledInstance> order_by_gold(std::vector<LabeledInstance> stream) {
  for (const auto& inst : stream) {
    if (!inst.gold)
      throw Error("order_by_gold: instance " + std::to_string(inst.index) +
                  " has no gold label");
  }
  std::stable_sort(stream.begin(), stream.end(),
                   [](const LabeledInstance& a, const LabeledInstance& b) {
                     return *a.gold < *b.gold;
                   });
  for (std::size_t i = 0; i < stream.size(); ++i) stream[i].index = i;
  return stream;
}

// --- window aggregation ------------------------------------------------------

// Incremental sliding sums drift, so the running sum is recomputed exactly at
// fixed positions. The interval must stay <= 4096 to keep window means within
// 1e-9 of naive recomputation; fixed positions (rather than a step counter)
// keep the result independent of where a worker's partition begins.
inline constexpr std::size_t kResumInterval = 4096;

/// out[i] = sum of x[i .. i+window) for every rolling window start.
inline std::vector<double> rolling_sums(std::span<const double> x, std::size_t window) {
  if (window == 0) throw Error("bin size must be >= 1");
  if (window > x.size()) throw Error("bin size exceeds stream length");
  std::vector<double> out(x.size() - window + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < window; ++j) sum += x[j];
  out[0] = sum;
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (i % kResumInterval == 0) {
      sum = 0.0;
      for (std::size_t j = i; j < i + window; ++j) sum += x[j];
    } else {
      sum -= x[i - 1];
      sum += x[i + window - 1];
    }
    out[i] = sum;
  }
  return out;
}

namespace detail {

// Ratio-of-rolling-sums arc: every binning in this module is numerator /
// denominator per window, with the point missing when the denominator is 0.
inline EmotionArc arc_from_channels(std::span<const double> numerator,
                                    std::span<const double> denominator, BinSpec bin) {
  if (numerator.size() != denominator.size())
    throw Error("internal: channel length mismatch");
  const std::size_t n = numerator.size();
  if (bin.size == 0) throw Error("bin size must be >= 1");
  if (bin.size > n)
    throw Error("bin size " + std::to_string(bin.size) + " exceeds stream length " +
                std::to_string(n));
  EmotionArc arc;
  arc.bin = bin;
  if (bin.mode == BinMode::Rolling) {
    const auto num = rolling_sums(numerator, bin.size);
    const auto den = rolling_sums(denominator, bin.size);
    arc.points.reserve(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) {
      ArcPoint p;
      p.position = static_cast<std::int64_t>(i);
      if (den[i] > 0.0) p.value = num[i] / den[i];
      arc.points.push_back(p);
    }
  } else {
    const std::size_t bins = n / bin.size;
    arc.points.reserve(bins);
    for (std::size_t k = 0; k < bins; ++k) {
      double num = 0.0, den = 0.0;
      for (std::size_t j = k * bin.size; j < (k + 1) * bin.size; ++j) {
        num += numerator[j];
        den += denominator[j];
      }
      ArcPoint p;
      p.position = static_cast<std::int64_t>(k * bin.size);
      if (den > 0.0) p.value = num / den;
      arc.points.push_back(p);
    }
  }
  return arc;
}

}  // namespace detail

/// Window means over a series with possible gaps: each point is the mean of
/// the present values in its window, missing when the window holds none.
inline EmotionArc arc_from_series(std::span<const std::optional<double>> values, BinSpec bin) {
  std::vector<double> num(values.size(), 0.0), den(values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) {
      num[i] = *values[i];
      den[i] = 1.0;
    }
  }
  return detail::arc_from_channels(num, den, bin);
}

/// Arc of window means over fully present values.
inline EmotionArc arc_from_values(std::span<const double> values, BinSpec bin) {
  std::vector<double> den(values.size(), 1.0);
  return detail::arc_from_channels(values, den, bin);
}

/// Gold arc: window means of the human-assigned labels. Every instance must
/// be labeled.
inline EmotionArc gold_arc(std::span<const LabeledInstance> stream, BinSpec bin) {
  std::vector<double> golds;
  golds.reserve(stream.size());
  for (const auto& inst : stream) {
    if (!inst.gold)
      throw Error("gold_arc: instance " + std::to_string(inst.index) + " has no gold label");
    golds.push_back(*inst.gold);
  }
  return arc_from_values(golds, bin);
}

enum class Pooling { InstanceMean, WordPooled };

inline std::string_view to_string(Pooling p) {
  return p == Pooling::InstanceMean ? "instance" : "word";
}

/// Scores every instance of a stream; output order follows input order.
inline std::vector<ScoredInstance> score_stream(std::span<const LabeledInstance> stream,
                                                const FallbackChain& chain, OOVPolicy policy,
                                                const PreprocessOptions& prep = {}) {
  std::vector<ScoredInstance> out;
  out.reserve(stream.size());
  for (const auto& inst : stream)
    out.push_back(score_instance(tokenize(preprocess(inst.text, prep)), chain, policy));
  return out;
}

/// Per-instance numerator/denominator contributions, the form every binning
/// consumes. Scoring a stream once and binning the channels at several sizes
/// avoids re-tokenizing per bin.
struct ScoreChannels {
  std::vector<double> num;
  std::vector<double> den;
};

inline ScoreChannels score_channels(std::span<const LabeledInstance> stream,
                                    const FallbackChain& chain, OOVPolicy policy,
                                    Pooling pooling, const PreprocessOptions& prep = {}) {
  ScoreChannels ch;
  ch.num.resize(stream.size());
  ch.den.resize(stream.size());
  if (pooling == Pooling::InstanceMean) {
    const auto scored = score_stream(stream, chain, policy, prep);
    for (std::size_t i = 0; i < scored.size(); ++i) {
      ch.num[i] = scored[i].score.value_or(0.0);
      ch.den[i] = scored[i].score ? 1.0 : 0.0;
    }
  } else {
    // Token-level pooling: an instance contributes its in-vocab score sum
    // and its denominator token count to every window that holds it.
    for (std::size_t i = 0; i < stream.size(); ++i) {
      const auto tokens = tokenize(preprocess(stream[i].text, prep));
      double sum = 0.0;
      std::size_t in_vocab = 0;
      for (const auto& token : tokens) {
        if (auto hit = chain.lookup(token)) {
          sum += hit->score;
          ++in_vocab;
        }
      }
      ch.num[i] = sum;
      ch.den[i] = policy == OOVPolicy::Skip ? static_cast<double>(in_vocab)
                                            : static_cast<double>(tokens.size());
    }
  }
  return ch;
}

inline EmotionArc arc_from_score_channels(const ScoreChannels& ch, BinSpec bin) {
  EmotionArc arc = detail::arc_from_channels(ch.num, ch.den, bin);
  if (arc.present_count() == 0) throw Error("predicted_arc: every window is missing");
  return arc;
}

/// Lexicon-predicted arc. InstanceMean bins the per-instance scores (windows
/// with no scoreable instance give a missing point). WordPooled bins at the
/// token level: the window mean runs over all window tokens, with Skip using
/// only in-vocabulary tokens and Zero using the full token count as the
/// denominator.
inline EmotionArc predicted_arc(std::span<const LabeledInstance> stream,
                                const FallbackChain& chain, OOVPolicy policy, Pooling pooling,
                                BinSpec bin, const PreprocessOptions& prep = {}) {
  if (stream.empty()) throw Error("predicted_arc: empty stream");
  return arc_from_score_channels(score_channels(stream, chain, policy, pooling, prep), bin);
}

/// Zero-mean unit-variance rescaling over present points (population std).
/// Missing points stay missing. Errors instead of emitting NaN when the arc
/// is constant.
inline EmotionArc standardize(EmotionArc arc) {
  const auto values = arc.present_values();
  if (values.size() < 2)
    throw Error("standardize: need at least 2 present points, have " +
                std::to_string(values.size()));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (var <= 0.0) throw Error("standardize: zero variance (constant arc)");
  const double sd = std::sqrt(var);
  for (auto& p : arc.points) {
    if (p.value) p.value = (*p.value - mean) / sd;
  }
  arc.standardized = true;
  return arc;
}

// --- arc serialization -------------------------------------------------------

/// CSV layout: a `# bin=<B> mode=<rolling|tumbling> standardized=<0|1>`
/// comment, a `position,value` header, then one row per point with the value
/// field empty for missing points.
inline void write_arc_csv(std::ostream& out, const EmotionArc& arc) {
  out << "# bin=" << arc.bin.size << " mode=" << to_string(arc.bin.mode)
      << " standardized=" << (arc.standardized ? 1 : 0) << "\n";
  out << "position,value\n";
  for (const auto& p : arc.points) {
    out << p.position << ',';
    if (p.value) out << format_double(*p.value);
    out << '\n';
  }
}

inline EmotionArc read_arc_csv(std::istream& in, const std::string& origin) {
  EmotionArc arc;
  std::string line;
  std::size_t line_no = 0;
  bool saw_meta = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      // Parse the metadata comment if it looks like ours.
      std::string_view rest(line);
      auto grab = [&](std::string_view key) -> std::optional<std::string> {
        auto pos = rest.find(key);
        if (pos == std::string_view::npos) return std::nullopt;
        pos += key.size();
        auto end = rest.find(' ', pos);
        return std::string(rest.substr(pos, end == std::string_view::npos ? end : end - pos));
      };
      if (auto b = grab("bin=")) {
        if (auto v = parse_double(*b); v && *v >= 1.0) {
          arc.bin.size = static_cast<std::size_t>(*v);
          saw_meta = true;
        }
      }
      if (auto m = grab("mode="))
        arc.bin.mode = (*m == "tumbling") ? BinMode::Tumbling : BinMode::Rolling;
      if (auto s = grab("standardized=")) arc.standardized = (*s == "1");
      continue;
    }
    if (line == "position,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(origin + ":" + std::to_string(line_no) + ": expected position,value");
    const auto pos = parse_double(std::string_view(line).substr(0, comma));
    if (!pos)
      throw Error(origin + ":" + std::to_string(line_no) + ": unparseable position");
    ArcPoint p;
    p.position = static_cast<std::int64_t>(*pos);
    const std::string_view val = std::string_view(line).substr(comma + 1);
    if (!val.empty()) {
      auto v = parse_double(val);
      if (!v) throw Error(origin + ":" + std::to_string(line_no) + ": unparseable value");
      p.value = *v;
    }
    arc.points.push_back(p);
  }
  if (arc.points.empty()) throw Error(origin + ": arc has no points");
  if (!saw_meta) arc.bin.size = 0;  // unknown bin; eval treats 0 as unchecked
  return arc;
}

inline EmotionArc read_arc_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open arc file: " + path.string());
  return read_arc_csv(in, path.string());
}

}  // namespace emoarcs
