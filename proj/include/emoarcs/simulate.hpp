#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emoarcs/arcs.hpp"
#include "emoarcs/core.hpp"
#include "emoarcs/rng.hpp"

namespace emoarcs {

/// Simulated instance-level classifier: emits the gold label with probability
/// `accuracy`, otherwise a uniform draw among the wrong labels.
struct OracleConfig {
  double accuracy = 1.0;
  std::vector<double> label_set;
  std::uint64_t seed = 0;
};

/// Instance-level accuracy of uniform random guessing: 1 / |label_set|.
inline double random_baseline(std::span<const double> label_set) {
  if (label_set.size() < 2) throw Error("random_baseline: need at least 2 labels");
  return 1.0 / static_cast<double>(label_set.size());
}

/// Per-instance draws are keyed by (seed, instance index), so predictions for
/// any instance are independent of evaluation order.
inline std::vector<double> oracle_labels(std::span<const LabeledInstance> stream,
                                         const OracleConfig& cfg) {
  if (cfg.accuracy < 0.0 || cfg.accuracy > 1.0)
    throw Error("oracle accuracy must lie in [0, 1]");
  if (cfg.label_set.size() < 2) throw Error("oracle label set must have at least 2 labels");

  std::vector<double> predictions;
  predictions.reserve(stream.size());
  for (const auto& inst : stream) {
    if (!inst.gold)
      throw Error("oracle_labels: instance " + std::to_string(inst.index) +
                  " has no gold label");
    const auto gold_it = std::find(cfg.label_set.begin(), cfg.label_set.end(), *inst.gold);
    if (gold_it == cfg.label_set.end())
      throw Error("oracle_labels: gold label " + format_double(*inst.gold) +
                  " of instance " + std::to_string(inst.index) + " is outside the label set");
    auto rng = keyed_rng(cfg.seed, inst.index);
    if (rng.next_unit() < cfg.accuracy) {
      predictions.push_back(*inst.gold);
    } else {
      const std::size_t gold_pos = static_cast<std::size_t>(gold_it - cfg.label_set.begin());
      std::size_t pick = static_cast<std::size_t>(rng.next_below(cfg.label_set.size() - 1));
      if (pick >= gold_pos) ++pick;  // skip over the gold label
      predictions.push_back(cfg.label_set[pick]);
    }
  }
  return predictions;
}

/// Wave synthesis parameters. The target trajectory alternates crests and
/// troughs; each extremum draws its amplitude (standardized units) from
/// amplitude_range and its distance from the previous extremum from
/// [width_min, width_max] instances. `neighbors` is the k of the k-nearest
/// sampling step.
struct WaveSpec {
  std::size_t n_crests = 200;
  std::size_t n_troughs = 200;
  Interval amplitude_range{0.5, 3.0};
  std::size_t width_min = 20;
  std::size_t width_max = 400;
  std::size_t neighbors = 10;
  std::uint64_t seed = 0;
};

struct ExtremaCount {
  std::size_t crests = 0;
  std::size_t troughs = 0;
};

/// Strict local extrema: position p counts only when both neighbors are
/// strictly below (crest) or strictly above (trough).
inline ExtremaCount count_extrema(std::span<const double> series) {
  ExtremaCount out;
  for (std::size_t p = 1; p + 1 < series.size(); ++p) {
    if (series[p - 1] < series[p] && series[p] > series[p + 1]) ++out.crests;
    if (series[p - 1] > series[p] && series[p] < series[p + 1]) ++out.troughs;
  }
  return out;
}

struct DynamicSynthesis {
  std::vector<LabeledInstance> stream;  // resampled instances, reindexed 0..T-1
  std::vector<double> target;           // trajectory in standardized units
  EmotionArc gold;                      // rolling mean of sampled golds, standardized
  ExtremaCount target_extrema;          // strict-scan counts on the trajectory
  ExtremaCount gold_extrema;            // strict-scan counts on the realized gold arc
};

/// Builds a dynamic text stream from a labeled source: (1) a piecewise-linear
/// target trajectory alternating crests and troughs until both quotas are
/// met, (2) mapped to raw label units via the source's label mean and std,
/// (3) realized by sampling, with replacement, uniformly among the k
/// instances whose gold labels sit nearest each trajectory step. The source
/// stream is never modified.
inline DynamicSynthesis synthesize_dynamic(std::span<const LabeledInstance> source,
                                           const WaveSpec& spec,
                                           BinSpec gold_bin = {100, BinMode::Rolling}) {
  if (spec.width_max < 3)
    throw Error("width range too small to realize an extremum (needs >= 3 steps per segment)");
  if (spec.width_min > spec.width_max) throw Error("width range is empty");
  if (spec.width_min < 1) throw Error("segment width must be >= 1");
  if (spec.amplitude_range.lo > spec.amplitude_range.hi || spec.amplitude_range.lo < 0.0)
    throw Error("amplitude range must be a nonempty interval of nonnegative values");
  if (spec.n_crests == 0 || spec.n_troughs == 0)
    throw Error("crest and trough quotas must be positive");
  // Strict alternation cannot realize quotas further than 1 apart: a second
  // consecutive crest implies an intervening trough.
  const std::size_t hi = std::max(spec.n_crests, spec.n_troughs);
  const std::size_t lo = std::min(spec.n_crests, spec.n_troughs);
  if (hi - lo > 1) throw Error("crest and trough quotas must differ by at most 1");
  if (spec.neighbors == 0) throw Error("neighbor count must be >= 1");

  std::vector<double> golds;
  golds.reserve(source.size());
  for (const auto& inst : source) {
    if (!inst.gold)
      throw Error("synthesize_dynamic: instance " + std::to_string(inst.index) +
                  " has no gold label");
    golds.push_back(*inst.gold);
  }
  const auto [mn, mx] = std::minmax_element(golds.begin(), golds.end());
  if (!(*mn < *mx))
    throw Error("synthesize_dynamic: gold labels must span at least 2 distinct values");
  double label_mean = 0.0;
  for (double g : golds) label_mean += g;
  label_mean /= static_cast<double>(golds.size());
  double label_var = 0.0;
  for (double g : golds) label_var += (g - label_mean) * (g - label_mean);
  label_var /= static_cast<double>(golds.size());
  const double label_sd = std::sqrt(label_var);

  SplitMix64 rng(spec.seed);
  DynamicSynthesis out;

  // Target trajectory: starts at 0, ramps linearly to each alternating
  // extremum, and closes with a ramp back to 0 so the last extremum has a
  // falling (or rising) neighbor.
  out.target.push_back(0.0);
  std::size_t crests = 0, troughs = 0;
  bool next_is_crest = spec.n_crests >= spec.n_troughs;
  while (crests < spec.n_crests || troughs < spec.n_troughs) {
    const double amplitude = rng.next_uniform(spec.amplitude_range.lo, spec.amplitude_range.hi);
    const double level = next_is_crest ? amplitude : -amplitude;
    const std::size_t width =
        static_cast<std::size_t>(rng.next_between(spec.width_min, spec.width_max));
    const double from = out.target.back();
    for (std::size_t s = 1; s < width; ++s) {
      out.target.push_back(from + (level - from) * static_cast<double>(s) /
                                      static_cast<double>(width));
    }
    out.target.push_back(level);  // land exactly on the extremum
    if (next_is_crest)
      ++crests;
    else
      ++troughs;
    next_is_crest = !next_is_crest;
  }
  {
    const std::size_t width =
        static_cast<std::size_t>(rng.next_between(spec.width_min, spec.width_max));
    const double from = out.target.back();
    for (std::size_t s = 1; s < width; ++s) {
      out.target.push_back(from - from * static_cast<double>(s) / static_cast<double>(width));
    }
    out.target.push_back(0.0);
  }
  out.target_extrema = count_extrema(out.target);

  // k-nearest sampling: indices sorted by gold, window of the k nearest
  // labels to each step's raw-unit target, one uniform pick per step.
  std::vector<std::size_t> by_gold(source.size());
  for (std::size_t i = 0; i < by_gold.size(); ++i) by_gold[i] = i;
  std::sort(by_gold.begin(), by_gold.end(),
            [&](std::size_t a, std::size_t b) { return golds[a] < golds[b]; });
  std::vector<double> sorted_golds(by_gold.size());
  for (std::size_t i = 0; i < by_gold.size(); ++i) sorted_golds[i] = golds[by_gold[i]];
  const std::size_t k = std::min(spec.neighbors, source.size());

  out.stream.reserve(out.target.size());
  for (std::size_t t = 0; t < out.target.size(); ++t) {
    const double raw_target = label_mean + label_sd * out.target[t];
    // Expand a window of size k around the insertion point, preferring the
    // strictly nearer side and the left side on ties.
    std::size_t loi = static_cast<std::size_t>(
        std::lower_bound(sorted_golds.begin(), sorted_golds.end(), raw_target) -
        sorted_golds.begin());
    std::size_t hii = loi;  // window is [loi, hii)
    while (hii - loi < k) {
      if (loi == 0) {
        ++hii;
      } else if (hii == sorted_golds.size()) {
        --loi;
      } else if (std::abs(sorted_golds[loi - 1] - raw_target) <=
                 std::abs(sorted_golds[hii] - raw_target)) {
        --loi;
      } else {
        ++hii;
      }
    }
    const std::size_t pick = loi + static_cast<std::size_t>(rng.next_below(hii - loi));
    const auto& src = source[by_gold[pick]];
    out.stream.push_back(LabeledInstance{t, src.text, src.gold});
  }

  out.gold = standardize(gold_arc(out.stream, gold_bin));
  out.gold_extrema = count_extrema(out.gold.present_values());
  return out;
}

}  // namespace emoarcs
