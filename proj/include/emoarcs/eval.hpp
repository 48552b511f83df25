#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "emoarcs/arcs.hpp"
#include "emoarcs/core.hpp"
#include "emoarcs/lexicon.hpp"
#include "emoarcs/rng.hpp"
#include "emoarcs/text.hpp"

namespace emoarcs {

/// Tie handling throughout: fractional average ranks, then Pearson on the
/// ranks. Gold arcs built from categorical labels are heavily tied, so this
/// choice is load-bearing and is recorded in every report.
inline constexpr std::string_view kTieHandling = "fractional-average-rank-pearson";

/// 1-based fractional ranks; tied values share the average of their ranks.
inline std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

namespace detail {

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error("spearman undefined: one side is constant");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

/// Spearman rank correlation over two aligned value vectors.
inline double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("spearman: length mismatch");
  if (a.size() < 2) throw Error("spearman: need at least 2 points");
  const auto ra = fractional_ranks(a);
  const auto rb = fractional_ranks(b);
  return detail::pearson(ra, rb);
}

/// Value pairs at positions present in both arcs; n_excluded counts aligned
/// positions where either side is missing.
struct Alignment {
  std::vector<double> a;
  std::vector<double> b;
  std::size_t n_excluded = 0;
};

inline Alignment align_arcs(const EmotionArc& lhs, const EmotionArc& rhs) {
  std::unordered_map<std::int64_t, const ArcPoint*> by_pos;
  by_pos.reserve(rhs.points.size());
  for (const auto& p : rhs.points) by_pos.emplace(p.position, &p);
  Alignment out;
  for (const auto& p : lhs.points) {
    auto it = by_pos.find(p.position);
    if (it == by_pos.end()) continue;
    if (p.value && it->second->value) {
      out.a.push_back(*p.value);
      out.b.push_back(*it->second->value);
    } else {
      ++out.n_excluded;
    }
  }
  return out;
}

inline double spearman(const EmotionArc& a, const EmotionArc& b) {
  const auto aligned = align_arcs(a, b);
  return spearman(aligned.a, aligned.b);
}

/// Full parameter record attached to every evaluation, so any reported rho is
/// attributable to the exact configuration that produced it.
struct EvalParams {
  std::string dataset;
  std::string emotion;
  std::string lexicon;
  LexiconKind kind = LexiconKind::Continuous;
  OOVPolicy oov = OOVPolicy::Skip;
  Pooling pooling = Pooling::InstanceMean;
  double threshold = 0.0;
  std::size_t bin = 1;
  BinMode bin_mode = BinMode::Rolling;
  bool fallback = false;
  std::uint64_t seed = 0;

  friend bool operator==(const EvalParams&, const EvalParams&) = default;

  /// Canonical key=value string; the sweep cell identity.
  std::string canonical() const {
    std::string s;
    s += "dataset=" + dataset;
    s += ";emotion=" + emotion;
    s += ";lexicon=" + lexicon;
    s += ";kind=" + std::string(to_string(kind));
    s += ";oov=" + std::string(to_string(oov));
    s += ";pooling=" + std::string(to_string(pooling));
    s += ";threshold=" + format_double(threshold);
    s += ";bin=" + std::to_string(bin);
    s += ";mode=" + std::string(to_string(bin_mode));
    s += ";fallback=" + std::string(fallback ? "true" : "false");
    s += ";seed=" + std::to_string(seed);
    return s;
  }

  std::string hash() const { return to_hex(fnv1a64(canonical())); }
};

inline void to_json(nlohmann::json& j, const EvalParams& p) {
  j = nlohmann::json{{"dataset", p.dataset},
                     {"emotion", p.emotion},
                     {"lexicon", p.lexicon},
                     {"kind", std::string(to_string(p.kind))},
                     {"oov", std::string(to_string(p.oov))},
                     {"pooling", std::string(to_string(p.pooling))},
                     {"threshold", p.threshold},
                     {"bin", p.bin},
                     {"mode", std::string(to_string(p.bin_mode))},
                     {"fallback", p.fallback},
                     {"seed", p.seed}};
}

inline void from_json(const nlohmann::json& j, EvalParams& p) {
  p.dataset = j.at("dataset").get<std::string>();
  p.emotion = j.at("emotion").get<std::string>();
  p.lexicon = j.at("lexicon").get<std::string>();
  p.kind = j.at("kind").get<std::string>() == "categorical" ? LexiconKind::Categorical
                                                            : LexiconKind::Continuous;
  p.oov = j.at("oov").get<std::string>() == "zero" ? OOVPolicy::Zero : OOVPolicy::Skip;
  p.pooling = j.at("pooling").get<std::string>() == "word" ? Pooling::WordPooled
                                                           : Pooling::InstanceMean;
  p.threshold = j.at("threshold").get<double>();
  p.bin = j.at("bin").get<std::size_t>();
  p.bin_mode = j.at("mode").get<std::string>() == "tumbling" ? BinMode::Tumbling
                                                             : BinMode::Rolling;
  p.fallback = j.at("fallback").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
}

struct EvalReport {
  double rho = 0.0;
  std::size_t n_points = 0;
  std::size_t n_excluded = 0;
  EvalParams params;
};

inline void to_json(nlohmann::json& j, const EvalReport& r) {
  j = nlohmann::json{{"rho", r.rho},
                     {"n_points", r.n_points},
                     {"n_excluded", r.n_excluded},
                     {"tie_handling", std::string(kTieHandling)},
                     {"params", r.params}};
}

/// Correlates a predicted arc with its gold arc. Both arcs must come from the
/// same stream and bin spec; a known bin mismatch is rejected (bin size 0
/// marks an arc loaded from CSV without metadata and is not checked).
inline EvalReport evaluate(const EmotionArc& predicted, const EmotionArc& gold,
                           EvalParams params = {}) {
  if (predicted.bin.size != 0 && gold.bin.size != 0 && !(predicted.bin == gold.bin))
    throw Error("evaluate: predicted and gold arcs use different bin specs");
  const auto aligned = align_arcs(predicted, gold);
  EvalReport report;
  report.rho = spearman(aligned.a, aligned.b);
  report.n_points = aligned.a.size();
  report.n_excluded = aligned.n_excluded;
  report.params = std::move(params);
  // The evaluated arcs are the authority on the bin actually used.
  if (predicted.bin.size != 0) {
    report.params.bin = predicted.bin.size;
    report.params.bin_mode = predicted.bin.mode;
  } else if (gold.bin.size != 0) {
    report.params.bin = gold.bin.size;
    report.params.bin_mode = gold.bin.mode;
  }
  return report;
}

/// Paired bootstrap over aligned arc positions: resamples positions with
/// replacement and compares the two settings' correlations with the gold arc
/// on each resample. The p-value is an approximate two-sided sign test on
/// the resampled differences.
struct BootstrapResult {
  double mean_diff = 0.0;   // mean of rho_a - rho_b over resamples
  double p_value = 1.0;     // two-sided sign test on the resampled diffs
  std::size_t n_resamples = 0;
};

inline BootstrapResult bootstrap_rho_difference(const EmotionArc& pred_a,
                                                const EmotionArc& pred_b,
                                                const EmotionArc& gold,
                                                std::size_t n_resamples, std::uint64_t seed) {
  const auto pa = align_arcs(pred_a, gold);
  const auto pb = align_arcs(pred_b, gold);
  if (pa.a.size() < 2 || pb.a.size() < 2)
    throw Error("bootstrap: need at least 2 aligned points per setting");
  if (pa.a.size() != pb.a.size())
    throw Error("bootstrap: settings align to different position sets");
  const std::size_t n = pa.a.size();
  BootstrapResult out;
  std::size_t non_negative = 0, non_positive = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < n_resamples; ++r) {
    auto rng = keyed_rng(seed, r);
    std::vector<double> xa(n), ya(n), xb(n), yb(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick = static_cast<std::size_t>(rng.next_below(n));
      xa[i] = pa.a[pick];
      ya[i] = pa.b[pick];
      xb[i] = pb.a[pick];
      yb[i] = pb.b[pick];
    }
    double diff = 0.0;
    try {
      diff = spearman(xa, ya) - spearman(xb, yb);
    } catch (const Error&) {
      continue;  // constant resample; drop it
    }
    sum += diff;
    ++out.n_resamples;
    if (diff >= 0.0) ++non_negative;
    if (diff <= 0.0) ++non_positive;
  }
  if (out.n_resamples == 0) throw Error("bootstrap: every resample was degenerate");
  out.mean_diff = sum / static_cast<double>(out.n_resamples);
  // Two-sided sign test; exact ties support both directions.
  const double lo = static_cast<double>(std::min(non_negative, non_positive)) /
                    static_cast<double>(out.n_resamples);
  out.p_value = std::min(1.0, 2.0 * lo);
  return out;
}

}  // namespace emoarcs
