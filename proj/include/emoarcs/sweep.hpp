#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "emoarcs/arcs.hpp"
#include "emoarcs/core.hpp"
#include "emoarcs/csv.hpp"
#include "emoarcs/eval.hpp"
#include "emoarcs/lexicon.hpp"
#include "emoarcs/text.hpp"

namespace emoarcs {

// --- config file -------------------------------------------------------------
//
// The sweep config is a flat TOML subset: one `key = value` per line, values
// are strings ("..."), numbers, booleans, or single-line arrays of those.
// Dotted keys group datasets and lexicons. `#` starts a comment.

struct ConfigValue {
  std::variant<bool, double, std::string> v;

  bool as_bool(const std::string& key) const {
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw Error("config key '" + key + "' must be a boolean");
  }
  double as_number(const std::string& key) const {
    if (auto* d = std::get_if<double>(&v)) return *d;
    throw Error("config key '" + key + "' must be a number");
  }
  std::string as_string(const std::string& key) const {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    throw Error("config key '" + key + "' must be a string");
  }
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& origin) {
    KeyValueConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string_view trimmed = trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string_view::npos)
        throw Error(origin + ":" + std::to_string(line_no) + ": expected key = value");
      const std::string key(trim(trimmed.substr(0, eq)));
      const std::string_view raw = trim(trimmed.substr(eq + 1));
      if (key.empty() || raw.empty())
        throw Error(origin + ":" + std::to_string(line_no) + ": expected key = value");
      if (cfg.values_.contains(key))
        throw Error(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
      cfg.values_.emplace(key, parse_value_list(raw, origin, line_no));
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    return parse(in, path.string());
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  const std::vector<ConfigValue>& list(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error("missing config key '" + key + "'");
    return it->second;
  }

  const ConfigValue& scalar(const std::string& key) const {
    const auto& l = list(key);
    if (l.size() != 1) throw Error("config key '" + key + "' must be a single value");
    return l.front();
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? scalar(key).as_string(key) : fallback;
  }
  double get_number(const std::string& key, double fallback) const {
    return has(key) ? scalar(key).as_number(key) : fallback;
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? scalar(key).as_bool(key) : fallback;
  }

  /// Keys matching `prefix.<id>.suffix`, reported as the sorted set of ids.
  std::vector<std::string> ids_under(const std::string& prefix) const {
    std::set<std::string> ids;
    for (const auto& [key, _] : values_) {
      if (key.rfind(prefix + ".", 0) != 0) continue;
      const auto rest = key.substr(prefix.size() + 1);
      const auto dot = rest.find('.');
      if (dot != std::string::npos) ids.insert(rest.substr(0, dot));
    }
    return {ids.begin(), ids.end()};
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
      s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  static ConfigValue parse_scalar(std::string_view raw, const std::string& origin,
                                  std::size_t line_no) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
      return {std::string(raw.substr(1, raw.size() - 2))};
    if (raw == "true") return {true};
    if (raw == "false") return {false};
    if (auto num = parse_double(raw)) return {*num};
    throw Error(origin + ":" + std::to_string(line_no) + ": cannot parse value '" +
                std::string(raw) + "' (strings need quotes)");
  }

  static std::vector<ConfigValue> parse_value_list(std::string_view raw,
                                                   const std::string& origin,
                                                   std::size_t line_no) {
    std::vector<ConfigValue> out;
    if (raw.front() == '[') {
      if (raw.back() != ']')
        throw Error(origin + ":" + std::to_string(line_no) + ": unterminated array");
      std::string_view body = raw.substr(1, raw.size() - 2);
      std::size_t start = 0;
      bool in_quotes = false;
      for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i < body.size() && body[i] == '"') in_quotes = !in_quotes;
        if (i == body.size() || (body[i] == ',' && !in_quotes)) {
          const auto item = trim(body.substr(start, i - start));
          if (!item.empty()) out.push_back(parse_scalar(item, origin, line_no));
          start = i + 1;
        }
      }
      if (out.empty())
        throw Error(origin + ":" + std::to_string(line_no) + ": empty array");
    } else {
      out.push_back(parse_scalar(raw, origin, line_no));
    }
    return out;
  }

  std::map<std::string, std::vector<ConfigValue>> values_;
};

inline Interval parse_range(const std::string& spec) {
  const auto sep = spec.find("..");
  if (sep == std::string::npos)
    throw Error("range '" + spec + "' must look like lo..hi");
  const auto lo = parse_double(std::string_view(spec).substr(0, sep));
  const auto hi = parse_double(std::string_view(spec).substr(sep + 2));
  if (!lo || !hi) throw Error("range '" + spec + "' must look like lo..hi");
  return Interval{*lo, *hi};
}

// --- sweep definition ----------------------------------------------------------

struct DatasetSpec {
  std::string id;
  std::filesystem::path path;
  DatasetSchema schema;
};

struct LexiconSpec {
  std::string id;
  std::filesystem::path path;
  LexiconKind kind = LexiconKind::Continuous;
  Interval range;
  std::string emotion;
  std::optional<std::filesystem::path> fallback_path;  // code-switch companion
};

struct SweepConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<LexiconSpec> lexicons;

  std::vector<std::string> dataset_axis;
  std::vector<std::string> emotion_axis;
  std::vector<LexiconKind> kind_axis;
  std::vector<OOVPolicy> oov_axis;
  std::vector<Pooling> pooling_axis;
  std::vector<double> threshold_axis;
  std::vector<bool> fallback_axis;
  std::vector<std::size_t> bin_axis;
  std::vector<std::uint64_t> seed_axis;
  BinMode bin_mode = BinMode::Rolling;

  bool order_by_gold_first = true;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "results";

  static SweepConfig load(const std::filesystem::path& path) {
    const auto cfg = KeyValueConfig::parse_file(path);
    const auto base = path.parent_path();
    SweepConfig sc;
    sc.base_seed = static_cast<std::uint64_t>(cfg.get_number("seed", 0.0));
    sc.out_dir = cfg.get_string("out", "results");
    const std::string order = cfg.get_string("order", "gold");
    if (order != "gold" && order != "file")
      throw Error("config key 'order' must be \"gold\" or \"file\"");
    sc.order_by_gold_first = order == "gold";
    const std::string mode = cfg.get_string("bin_mode", "rolling");
    if (mode != "rolling" && mode != "tumbling")
      throw Error("config key 'bin_mode' must be \"rolling\" or \"tumbling\"");
    sc.bin_mode = mode == "tumbling" ? BinMode::Tumbling : BinMode::Rolling;

    for (const auto& id : cfg.ids_under("dataset")) {
      DatasetSpec ds;
      ds.id = id;
      ds.path = resolve(base, cfg.scalar("dataset." + id + ".path").as_string("path"));
      ds.schema.text_column = cfg.get_string("dataset." + id + ".text", "text");
      ds.schema.label_column = cfg.get_string("dataset." + id + ".label", "label");
      ds.schema.has_header = cfg.get_bool("dataset." + id + ".header", true);
      sc.datasets.push_back(std::move(ds));
    }
    if (sc.datasets.empty()) throw Error("config declares no datasets");

    for (const auto& id : cfg.ids_under("lexicon")) {
      LexiconSpec lx;
      lx.id = id;
      lx.path = resolve(base, cfg.scalar("lexicon." + id + ".path").as_string("path"));
      const std::string kind = cfg.get_string("lexicon." + id + ".kind", "cont");
      if (kind != "cat" && kind != "cont")
        throw Error("lexicon." + id + ".kind must be \"cat\" or \"cont\"");
      lx.kind = kind == "cat" ? LexiconKind::Categorical : LexiconKind::Continuous;
      lx.range = parse_range(cfg.scalar("lexicon." + id + ".range").as_string("range"));
      lx.emotion = cfg.scalar("lexicon." + id + ".emotion").as_string("emotion");
      if (cfg.has("lexicon." + id + ".fallback"))
        lx.fallback_path =
            resolve(base, cfg.scalar("lexicon." + id + ".fallback").as_string("fallback"));
      sc.lexicons.push_back(std::move(lx));
    }
    if (sc.lexicons.empty()) throw Error("config declares no lexicons");

    // Axes default to everything the declared data admits (or the standard
    // single-value settings for the method axes).
    if (cfg.has("axes.dataset")) {
      for (const auto& v : cfg.list("axes.dataset"))
        sc.dataset_axis.push_back(v.as_string("axes.dataset"));
    } else {
      for (const auto& ds : sc.datasets) sc.dataset_axis.push_back(ds.id);
    }
    if (cfg.has("axes.emotion")) {
      for (const auto& v : cfg.list("axes.emotion"))
        sc.emotion_axis.push_back(v.as_string("axes.emotion"));
    } else {
      std::set<std::string> emotions;
      for (const auto& lx : sc.lexicons) emotions.insert(lx.emotion);
      sc.emotion_axis.assign(emotions.begin(), emotions.end());
    }
    if (cfg.has("axes.kind")) {
      for (const auto& v : cfg.list("axes.kind")) {
        const auto s = v.as_string("axes.kind");
        if (s != "cat" && s != "cont") throw Error("axes.kind entries must be cat or cont");
        sc.kind_axis.push_back(s == "cat" ? LexiconKind::Categorical : LexiconKind::Continuous);
      }
    } else {
      std::set<std::string> kinds;
      for (const auto& lx : sc.lexicons) kinds.insert(std::string(to_string(lx.kind)));
      if (kinds.contains("categorical")) sc.kind_axis.push_back(LexiconKind::Categorical);
      if (kinds.contains("continuous")) sc.kind_axis.push_back(LexiconKind::Continuous);
    }
    if (cfg.has("axes.oov")) {
      for (const auto& v : cfg.list("axes.oov")) {
        const auto s = v.as_string("axes.oov");
        if (s != "skip" && s != "zero") throw Error("axes.oov entries must be skip or zero");
        sc.oov_axis.push_back(s == "skip" ? OOVPolicy::Skip : OOVPolicy::Zero);
      }
    } else {
      sc.oov_axis = {OOVPolicy::Skip};
    }
    if (cfg.has("axes.pooling")) {
      for (const auto& v : cfg.list("axes.pooling")) {
        const auto s = v.as_string("axes.pooling");
        if (s != "instance" && s != "word")
          throw Error("axes.pooling entries must be instance or word");
        sc.pooling_axis.push_back(s == "instance" ? Pooling::InstanceMean : Pooling::WordPooled);
      }
    } else {
      sc.pooling_axis = {Pooling::InstanceMean};
    }
    if (cfg.has("axes.threshold")) {
      for (const auto& v : cfg.list("axes.threshold"))
        sc.threshold_axis.push_back(v.as_number("axes.threshold"));
    } else {
      sc.threshold_axis = {0.0};
    }
    if (cfg.has("axes.fallback")) {
      for (const auto& v : cfg.list("axes.fallback"))
        sc.fallback_axis.push_back(v.as_bool("axes.fallback"));
    } else {
      sc.fallback_axis = {false};
    }
    if (cfg.has("axes.bin")) {
      for (const auto& v : cfg.list("axes.bin")) {
        const double b = v.as_number("axes.bin");
        if (b < 1.0) throw Error("axes.bin entries must be >= 1");
        sc.bin_axis.push_back(static_cast<std::size_t>(b));
      }
    } else {
      sc.bin_axis = {1, 10, 50, 100, 200, 300};
    }
    if (cfg.has("axes.seed")) {
      for (const auto& v : cfg.list("axes.seed"))
        sc.seed_axis.push_back(static_cast<std::uint64_t>(v.as_number("axes.seed")));
    } else {
      sc.seed_axis = {sc.base_seed};
    }
    return sc;
  }

  /// Cells in deterministic grid order; bin is the innermost axis so summary
  /// rows come out contiguous.
  std::vector<EvalParams> grid() const {
    std::vector<EvalParams> cells;
    for (const auto& ds : dataset_axis)
      for (const auto& emotion : emotion_axis)
        for (const auto kind : kind_axis)
          for (const auto oov : oov_axis)
            for (const auto pooling : pooling_axis)
              for (const double threshold : threshold_axis)
                for (const bool fallback : fallback_axis)
                  for (const auto seed : seed_axis)
                    for (const auto bin : bin_axis) {
                      EvalParams p;
                      p.dataset = ds;
                      p.emotion = emotion;
                      p.kind = kind;
                      p.oov = oov;
                      p.pooling = pooling;
                      p.threshold = threshold;
                      p.fallback = fallback;
                      p.seed = seed;
                      p.bin = bin;
                      p.bin_mode = bin_mode;
                      cells.push_back(std::move(p));
                    }
    return cells;
  }

 private:
  static std::filesystem::path resolve(const std::filesystem::path& base,
                                       const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  }
};

// --- sweep execution -----------------------------------------------------------

struct CellResult {
  EvalParams params;
  std::optional<EvalReport> report;  // absent when the cell errored
  std::string error;
  bool recomputed = false;  // false when replayed from an earlier run
};

namespace detail {

struct SweepCaches {
  std::unordered_map<std::string, std::shared_ptr<const std::vector<LabeledInstance>>> streams;
  std::unordered_map<std::string, std::shared_ptr<const Lexicon>> lexicons;
  std::unordered_map<std::string, std::shared_ptr<const ScoreChannels>> channels;
};

inline const LexiconSpec& resolve_lexicon(const SweepConfig& cfg, const std::string& emotion,
                                          LexiconKind kind) {
  const LexiconSpec* found = nullptr;
  for (const auto& lx : cfg.lexicons) {
    if (lx.emotion != emotion || lx.kind != kind) continue;
    if (found != nullptr)
      throw Error("more than one lexicon declared for emotion '" + emotion + "' kind " +
                  std::string(to_string(kind)));
    found = &lx;
  }
  if (found == nullptr)
    throw Error("no lexicon declared for emotion '" + emotion + "' kind " +
                std::string(to_string(kind)));
  return *found;
}

inline const DatasetSpec& resolve_dataset(const SweepConfig& cfg, const std::string& id) {
  for (const auto& ds : cfg.datasets)
    if (ds.id == id) return ds;
  throw Error("dataset '" + id + "' is not declared in the config");
}

// Loads (or replays) everything one cell needs; single-threaded by contract.
inline std::shared_ptr<const ScoreChannels> prepare_channels(const SweepConfig& cfg,
                                                             const EvalParams& cell,
                                                             SweepCaches& caches) {
  const auto& ds = resolve_dataset(cfg, cell.dataset);
  const auto& lx = resolve_lexicon(cfg, cell.emotion, cell.kind);

  const std::string channel_key = cell.dataset + "\x1f" + lx.id + "\x1f" +
                                  format_double(cell.threshold) + "\x1f" +
                                  (cell.fallback ? "fb" : "nofb") + "\x1f" +
                                  std::string(to_string(cell.oov)) + "\x1f" +
                                  std::string(to_string(cell.pooling));
  if (auto it = caches.channels.find(channel_key); it != caches.channels.end())
    return it->second;

  auto stream_it = caches.streams.find(cell.dataset);
  if (stream_it == caches.streams.end()) {
    auto stream = load_dataset(ds.path, ds.schema);
    if (cfg.order_by_gold_first) stream = order_by_gold(std::move(stream));
    stream_it = caches.streams
                    .emplace(cell.dataset, std::make_shared<const std::vector<LabeledInstance>>(
                                               std::move(stream)))
                    .first;
  }

  auto lexicon_for = [&](const std::filesystem::path& path,
                         const std::string& cache_id) -> std::shared_ptr<const Lexicon> {
    const std::string key = cache_id + "\x1f" + format_double(cell.threshold);
    if (auto it = caches.lexicons.find(key); it != caches.lexicons.end()) return it->second;
    Lexicon loaded = load_lexicon(path, lx.kind, lx.emotion, lx.range);
    if (cell.threshold > 0.0)
      loaded = apply_threshold(loaded, ThresholdFilter{cell.threshold});
    auto shared = std::make_shared<const Lexicon>(std::move(loaded));
    caches.lexicons.emplace(key, shared);
    return shared;
  };

  std::vector<std::shared_ptr<const Lexicon>> chain_members;
  chain_members.push_back(lexicon_for(lx.path, lx.id));
  if (cell.fallback) {
    if (!lx.fallback_path)
      throw Error("lexicon '" + lx.id + "' has no fallback file but the fallback axis is on");
    chain_members.push_back(lexicon_for(*lx.fallback_path, lx.id + ".fallback"));
  }
  const FallbackChain chain(std::move(chain_members));

  auto channels = std::make_shared<const ScoreChannels>(
      score_channels(*stream_it->second, chain, cell.oov, cell.pooling));
  caches.channels.emplace(channel_key, channels);
  return channels;
}

}  // namespace detail

/// Runs the grid. Completed cells (keyed by params hash) found in an existing
/// results table are replayed, not recomputed. Results are appended to
/// `results.csv` in grid order as they finish; `summary.csv` pivots rho by
/// bin size. Per-cell errors are recorded in the table and never abort the
/// sweep. Returns all cells in grid order.
inline std::vector<CellResult> run_sweep(const SweepConfig& cfg,
                                         const std::filesystem::path& out_dir,
                                         std::size_t jobs = 1, std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path results_path = out_dir / "results.csv";
  const fs::path summary_path = out_dir / "summary.csv";

  static const std::vector<std::string> kHeader = {
      "hash",      "dataset", "emotion", "lexicon",  "kind",
      "oov",       "pooling", "threshold", "bin",    "mode",
      "fallback",  "seed",    "rho",     "n_points", "n_excluded",
      "error"};

  // Rows from an earlier (possibly partial) run, keyed by cell hash.
  std::unordered_map<std::string, std::vector<std::string>> done;
  const bool had_results = fs::exists(results_path);
  if (had_results) {
    std::ifstream in(results_path, std::ios::binary);
    CsvReader reader(in, ',');
    std::vector<std::string> row;
    bool first = true;
    while (reader.next(row)) {
      if (first) {
        first = false;
        continue;
      }
      if (row.size() == kHeader.size()) done.emplace(row[0], row);
    }
  }

  const auto cells = cfg.grid();
  std::vector<CellResult> results(cells.size());

  // Resolve the lexicon id into every cell first: the cell hash covers the
  // full params record and must be identical across runs. A cell whose
  // lexicon cannot be resolved keeps an empty id (stable too) and will record
  // the resolution error when computed.
  std::vector<std::string> hashes(cells.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    results[i].params = cells[i];
    try {
      results[i].params.lexicon =
          detail::resolve_lexicon(cfg, cells[i].emotion, cells[i].kind).id;
    } catch (const std::exception&) {
    }
    hashes[i] = results[i].params.hash();
    if (!done.contains(hashes[i])) pending.push_back(i);
  }
  if (log != nullptr)
    *log << "sweep: " << cells.size() << " cells, " << pending.size() << " to compute, "
         << (cells.size() - pending.size()) << " replayed\n";

  // Load everything pending cells need up front, single-threaded, so the
  // compute phase only reads immutable data.
  detail::SweepCaches caches;
  std::vector<std::shared_ptr<const ScoreChannels>> cell_channels(cells.size());
  std::vector<std::shared_ptr<const std::vector<LabeledInstance>>> cell_streams(cells.size());
  for (const std::size_t i : pending) {
    try {
      cell_channels[i] = detail::prepare_channels(cfg, cells[i], caches);
      cell_streams[i] = caches.streams.at(cells[i].dataset);
    } catch (const std::exception& e) {
      results[i].error = e.what();
      results[i].recomputed = true;
    }
  }

  auto compute = [&](std::size_t i) {
    if (!results[i].error.empty()) return;  // failed during preparation
    try {
      const auto gold = gold_arc(*cell_streams[i], BinSpec{cells[i].bin, cells[i].bin_mode});
      const auto pred =
          arc_from_score_channels(*cell_channels[i], BinSpec{cells[i].bin, cells[i].bin_mode});
      results[i].report = evaluate(pred, gold, results[i].params);
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
    results[i].recomputed = true;
  };

  auto row_for = [&](const CellResult& r) {
    std::vector<std::string> row;
    const auto& p = r.params;
    row.push_back(p.hash());
    row.push_back(p.dataset);
    row.push_back(p.emotion);
    row.push_back(p.lexicon);
    row.push_back(std::string(to_string(p.kind)));
    row.push_back(std::string(to_string(p.oov)));
    row.push_back(std::string(to_string(p.pooling)));
    row.push_back(format_double(p.threshold));
    row.push_back(std::to_string(p.bin));
    row.push_back(std::string(to_string(p.bin_mode)));
    row.push_back(p.fallback ? "true" : "false");
    row.push_back(std::to_string(p.seed));
    if (r.report) {
      row.push_back(format_double(r.report->rho));
      row.push_back(std::to_string(r.report->n_points));
      row.push_back(std::to_string(r.report->n_excluded));
      row.push_back("");
    } else {
      row.push_back("");
      row.push_back("");
      row.push_back("");
      row.push_back(r.error);
    }
    return row;
  };

  // Compute and write. Workers fill cells from a shared cursor; the single
  // writer appends rows in grid order the moment each cell (and every cell
  // before it) finishes, flushing per row, so an interrupted sweep leaves a
  // resumable prefix on disk. Replayed rows keep their existing bytes.
  {
    std::ofstream out(results_path, had_results ? std::ios::app | std::ios::binary
                                                : std::ios::binary);
    if (!out) throw Error("cannot write " + results_path.string());
    if (!had_results) {
      write_row(out, kHeader, ',');
      out.flush();
    }

    std::mutex mutex;
    std::condition_variable cv;
    std::vector<char> finished(cells.size(), 0);
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> cursor{0};
    if (jobs > 1) {
      for (std::size_t w = 0; w < jobs; ++w) {
        workers.push_back(std::async(std::launch::async, [&]() {
          while (true) {
            const std::size_t slot = cursor.fetch_add(1);
            if (slot >= pending.size()) return;
            compute(pending[slot]);
            {
              const std::lock_guard<std::mutex> lock(mutex);
              finished[pending[slot]] = 1;
            }
            cv.notify_all();
          }
        }));
      }
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (auto it = done.find(hashes[i]); it != done.end()) {
        // Replayed: fill the in-memory result from the recorded row.
        const auto& row = it->second;
        if (!row[12].empty()) {
          EvalReport rep;
          rep.rho = parse_double(row[12]).value_or(0.0);
          rep.n_points = static_cast<std::size_t>(parse_double(row[13]).value_or(0.0));
          rep.n_excluded = static_cast<std::size_t>(parse_double(row[14]).value_or(0.0));
          rep.params = results[i].params;
          results[i].report = rep;
        } else {
          results[i].error = row[15];
        }
        continue;
      }
      if (jobs <= 1) {
        compute(i);
      } else {
        std::unique_lock<std::mutex> lock(mutex);
        cv.wait(lock, [&]() { return finished[i] != 0; });
      }
      write_row(out, row_for(results[i]), ',');
      out.flush();
    }
    for (auto& f : workers) f.get();
  }

  // Pivoted summary: one row per non-bin combination, bins as columns.
  {
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw Error("cannot write " + summary_path.string());
    std::vector<std::size_t> bins = cfg.bin_axis;
    std::vector<std::string> header = {"dataset", "emotion",  "lexicon",  "kind", "oov",
                                       "pooling", "threshold", "fallback", "seed"};
    for (const auto b : bins) header.push_back("bin" + std::to_string(b));
    write_row(out, header, ',');
    std::vector<std::string> key_order;
    std::unordered_map<std::string, std::unordered_map<std::size_t, std::string>> cells_by_key;
    for (const auto& r : results) {
      const auto& p = r.params;
      const std::string key = p.dataset + "\x1f" + p.emotion + "\x1f" + p.lexicon + "\x1f" +
                              std::string(to_string(p.kind)) + "\x1f" +
                              std::string(to_string(p.oov)) + "\x1f" +
                              std::string(to_string(p.pooling)) + "\x1f" +
                              format_double(p.threshold) + "\x1f" +
                              (p.fallback ? "true" : "false") + "\x1f" + std::to_string(p.seed);
      if (!cells_by_key.contains(key)) key_order.push_back(key);
      cells_by_key[key][p.bin] = r.report ? format_double(r.report->rho) : "";
    }
    for (const auto& key : key_order) {
      std::vector<std::string> row;
      std::string_view rest = key;
      while (true) {
        const auto us = rest.find('\x1f');
        row.emplace_back(rest.substr(0, us));
        if (us == std::string_view::npos) break;
        rest.remove_prefix(us + 1);
      }
      for (const auto b : bins) {
        auto& by_bin = cells_by_key[key];
        row.push_back(by_bin.contains(b) ? by_bin[b] : "");
      }
      write_row(out, row, ',');
    }
  }

  return results;
}

}  // namespace emoarcs
