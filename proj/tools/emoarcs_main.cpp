// emoarcs command line: lexicon validation, instance scoring, arc generation,
// oracle simulation, dynamic stream synthesis, evaluation, sweeps, and SVG
// plots. Every run writes a manifest (parameters + input hashes) next to its
// outputs; all randomness flows through an explicit --seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emoarcs/emoarcs.hpp"

namespace fs = std::filesystem;
using namespace emoarcs;

namespace {

struct GlobalOpts {
  bool json = false;
  bool quiet = false;
  fs::path out_dir;
};

void note(const GlobalOpts& global, const std::string& msg) {
  if (!global.quiet) std::cerr << msg << "\n";
}

std::string g_argv_line;  // full invocation, recorded in every manifest

Manifest make_manifest(std::string subcommand) {
  Manifest manifest(std::move(subcommand));
  manifest.set_argv(g_argv_line);
  return manifest;
}

fs::path resolve_out(const GlobalOpts& global, const std::string& explicit_out,
                     const std::string& default_name) {
  if (!explicit_out.empty()) return explicit_out;
  return global.out_dir / default_name;
}

void emit_warnings(const WarningList& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// --- dataset schema flags ----------------------------------------------------

struct SchemaOpts {
  std::string text = "text";
  std::string label = "label";
  bool no_label = false;
  bool no_header = false;
  std::string delim = "auto";
};

void attach_schema_opts(CLI::App* cmd, SchemaOpts& opts) {
  cmd->add_option("--text-col", opts.text, "text column name (or 0-based index with --no-header)");
  cmd->add_option("--label-col", opts.label, "label column name (or index)");
  cmd->add_flag("--no-label", opts.no_label, "dataset has no label column");
  cmd->add_flag("--no-header", opts.no_header, "dataset has no header row; columns are indices");
  cmd->add_option("--delim", opts.delim, "field delimiter: auto, tab, or comma")
      ->check(CLI::IsMember({"auto", "tab", "comma"}));
}

DatasetSchema to_schema(const SchemaOpts& opts) {
  DatasetSchema schema;
  schema.text_column = opts.text;
  schema.label_column = opts.no_label ? std::nullopt : std::optional<std::string>(opts.label);
  schema.has_header = !opts.no_header;
  if (opts.delim == "tab") schema.delimiter = '\t';
  if (opts.delim == "comma") schema.delimiter = ',';
  return schema;
}

// --- lexicon / chain flags -----------------------------------------------------

struct LexOpts {
  std::vector<std::string> paths;
  std::string kind = "cont";
  std::string range = "-1..1";
  std::string emotion = "valence";
  double threshold = 0.0;
};

void attach_lex_opts(CLI::App* cmd, LexOpts& opts) {
  cmd->add_option("--lexicon", opts.paths,
                  "lexicon TSV file(s); the first is primary, the rest are fallbacks")
      ->required()
      ->expected(-1);
  cmd->add_option("--kind", opts.kind, "lexicon score kind")
      ->check(CLI::IsMember({"cat", "cont"}));
  cmd->add_option("--range", opts.range, "declared score range lo..hi");
  cmd->add_option("--emotion", opts.emotion, "emotion dimension or category");
  cmd->add_option("--threshold", opts.threshold,
                  "keep only entries with |score| above this value");
}

FallbackChain build_chain(const LexOpts& opts, WarningList* warnings, Manifest& manifest) {
  const auto kind = opts.kind == "cat" ? LexiconKind::Categorical : LexiconKind::Continuous;
  const auto range = parse_range(opts.range);
  std::vector<std::shared_ptr<const Lexicon>> members;
  for (const auto& path : opts.paths) {
    manifest.add_input(path);
    Lexicon lex = load_lexicon(path, kind, opts.emotion, range, warnings);
    if (opts.threshold > 0.0)
      lex = apply_threshold(lex, ThresholdFilter{opts.threshold}, warnings);
    members.push_back(std::make_shared<const Lexicon>(std::move(lex)));
  }
  return FallbackChain(std::move(members));
}

OOVPolicy parse_oov(const std::string& s) {
  return s == "zero" ? OOVPolicy::Zero : OOVPolicy::Skip;
}

BinSpec parse_bin(std::size_t size, const std::string& mode) {
  if (size == 0) throw Error("bin size must be >= 1");
  return BinSpec{size, mode == "tumbling" ? BinMode::Tumbling : BinMode::Rolling};
}

// Label sets come as "-3..3" (integer range) or "0,1,2,3" (explicit list).
std::vector<double> parse_label_set(const std::string& spec) {
  std::vector<double> labels;
  if (spec.find("..") != std::string::npos) {
    const auto range = parse_range(spec);
    for (double v = range.lo; v <= range.hi; v += 1.0) labels.push_back(v);
  } else {
    std::string_view rest(spec);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto v = parse_double(item);
      if (!v) throw Error("cannot parse label '" + std::string(item) + "'");
      labels.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  if (labels.size() < 2) throw Error("label set must contain at least 2 labels");
  return labels;
}

// dynamic's interval flags: "0.5:3.0" and "20:400"
std::pair<double, double> parse_pair(const std::string& spec, const std::string& flag) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(flag + " must look like lo:hi, got '" + spec + "'");
  const auto lo = parse_double(std::string_view(spec).substr(0, colon));
  const auto hi = parse_double(std::string_view(spec).substr(colon + 1));
  if (!lo || !hi) throw Error(flag + " must look like lo:hi, got '" + spec + "'");
  return {*lo, *hi};
}

void write_dataset_tsv(const fs::path& path, std::span<const LabeledInstance> stream,
                       std::span<const double> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "text\tlabel\n";
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const std::vector<std::string> row{stream[i].text, format_double(labels[i])};
    write_row(out, row, '\t');
  }
}

void write_arc_output(const fs::path& path, const EmotionArc& arc, bool json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (!json) {
    write_arc_csv(out, arc);
    return;
  }
  for (const auto& p : arc.points) {
    nlohmann::json line{{"position", p.position}};
    if (p.value)
      line["value"] = *p.value;
    else
      line["value"] = nullptr;
    out << line.dump() << "\n";
  }
}

// --- subcommand payloads --------------------------------------------------------

struct LexiconValidateArgs {
  std::string path;
  std::string kind = "cont";
  std::string range = "-1..1";
  std::string emotion = "valence";
};

int run_lexicon_validate(const LexiconValidateArgs& args) {
  WarningList warnings;
  const auto kind = args.kind == "cat" ? LexiconKind::Categorical : LexiconKind::Continuous;
  const auto lex = load_lexicon(args.path, kind, args.emotion, parse_range(args.range),
                                &warnings);
  std::cout << "file: " << args.path << "\n";
  std::cout << "kind: " << to_string(lex.kind()) << "\n";
  std::cout << "range: [" << format_double(lex.score_range().lo) << ", "
            << format_double(lex.score_range().hi) << "]\n";
  std::cout << "entries: " << lex.size() << "\n";

  std::cout << "score histogram:\n";
  if (lex.kind() == LexiconKind::Categorical) {
    std::map<double, std::size_t> counts;
    for (const auto& [_, score] : lex.entries()) ++counts[score];
    for (const auto& [label, count] : counts)
      std::cout << "  " << format_double(label) << ": " << count << "\n";
  } else {
    constexpr int kBuckets = 10;
    std::vector<std::size_t> counts(kBuckets, 0);
    const double lo = lex.score_range().lo;
    const double span = lex.score_range().span();
    for (const auto& [_, score] : lex.entries()) {
      int b = span > 0 ? static_cast<int>((score - lo) / span * kBuckets) : 0;
      b = std::clamp(b, 0, kBuckets - 1);
      ++counts[static_cast<std::size_t>(b)];
    }
    auto edge = [&](int b) { return lo + span * b / kBuckets; };
    for (int b = 0; b < kBuckets; ++b)
      std::cout << "  [" << format_double(edge(b)) << ", " << format_double(edge(b + 1))
                << (b == kBuckets - 1 ? "]" : ")") << ": "
                << counts[static_cast<std::size_t>(b)] << "\n";
  }

  std::size_t duplicates = 0;
  for (const auto& w : warnings)
    if (w.find("duplicate") != std::string::npos) ++duplicates;
  std::cout << "duplicate entries (identical score): " << duplicates << "\n";
  emit_warnings(warnings);
  return 0;
}

struct ScoreArgs {
  LexOpts lex;
  SchemaOpts schema;
  std::string input;
  std::string oov = "skip";
  std::string out;
  PreprocessOptions prep;
};

int run_score(const GlobalOpts& global, const ScoreArgs& args) {
  Manifest manifest = make_manifest("score");
  WarningList warnings;
  const auto chain = build_chain(args.lex, &warnings, manifest);
  manifest.add_input(args.input);
  const auto stream = load_dataset(args.input, to_schema(args.schema));
  const auto scored = score_stream(stream, chain, parse_oov(args.oov), args.prep);

  const auto out_path = resolve_out(global, args.out, "scores.csv");
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + out_path.string());
  if (global.json) {
    for (std::size_t i = 0; i < scored.size(); ++i) {
      nlohmann::json line{{"index", i},
                          {"token_count", scored[i].token_count},
                          {"in_vocab_count", scored[i].in_vocab_count}};
      if (scored[i].score)
        line["score"] = *scored[i].score;
      else
        line["score"] = nullptr;
      out << line.dump() << "\n";
    }
  } else {
    out << "index,score,token_count,in_vocab_count\n";
    for (std::size_t i = 0; i < scored.size(); ++i) {
      out << i << ',';
      if (scored[i].score) out << format_double(*scored[i].score);
      out << ',' << scored[i].token_count << ',' << scored[i].in_vocab_count << "\n";
    }
  }

  manifest.set_params({{"oov", args.oov},
                       {"threshold", args.lex.threshold},
                       {"emotion", args.lex.emotion},
                       {"kind", args.lex.kind},
                       {"json", global.json}});
  manifest.add_output(out_path);
  manifest.write(out_path.string() + ".manifest.json");
  emit_warnings(warnings);
  note(global, "scored " + std::to_string(scored.size()) + " instances -> " + out_path.string());
  return 0;
}

struct GoldArgs {
  SchemaOpts schema;
  std::string input;
  std::size_t bin = 1;
  std::string mode = "rolling";
  std::string order = "file";
  bool do_standardize = false;
  std::string out;
};

int run_gold(const GlobalOpts& global, const GoldArgs& args) {
  Manifest manifest = make_manifest("gold");
  manifest.add_input(args.input);
  auto stream = load_dataset(args.input, to_schema(args.schema));
  if (args.order == "gold") stream = order_by_gold(std::move(stream));
  auto arc = gold_arc(stream, parse_bin(args.bin, args.mode));
  if (args.do_standardize) arc = standardize(std::move(arc));

  const auto out_path = resolve_out(global, args.out, "gold.csv");
  write_arc_output(out_path, arc, global.json);
  manifest.set_params({{"bin", args.bin},
                       {"mode", args.mode},
                       {"order", args.order},
                       {"standardize", args.do_standardize},
                       {"json", global.json}});
  manifest.add_output(out_path);
  manifest.write(out_path.string() + ".manifest.json");
  note(global, "gold arc: " + std::to_string(arc.points.size()) + " points -> " + out_path.string());
  return 0;
}

struct ArcArgs {
  LexOpts lex;
  SchemaOpts schema;
  std::string input;
  std::string oov = "skip";
  std::string pooling = "instance";
  std::size_t bin = 1;
  std::string mode = "rolling";
  std::string order = "file";
  bool do_standardize = false;
  std::string out;
  PreprocessOptions prep;
};

int run_arc(const GlobalOpts& global, const ArcArgs& args) {
  Manifest manifest = make_manifest("arc");
  WarningList warnings;
  const auto chain = build_chain(args.lex, &warnings, manifest);
  manifest.add_input(args.input);
  auto stream = load_dataset(args.input, to_schema(args.schema));
  if (args.order == "gold") stream = order_by_gold(std::move(stream));
  auto arc = predicted_arc(stream, chain, parse_oov(args.oov),
                           args.pooling == "word" ? Pooling::WordPooled : Pooling::InstanceMean,
                           parse_bin(args.bin, args.mode), args.prep);
  if (args.do_standardize) arc = standardize(std::move(arc));

  const auto out_path = resolve_out(global, args.out, "arc.csv");
  write_arc_output(out_path, arc, global.json);
  manifest.set_params({{"bin", args.bin},
                       {"mode", args.mode},
                       {"oov", args.oov},
                       {"pooling", args.pooling},
                       {"order", args.order},
                       {"threshold", args.lex.threshold},
                       {"emotion", args.lex.emotion},
                       {"kind", args.lex.kind},
                       {"standardize", args.do_standardize},
                       {"json", global.json}});
  manifest.add_output(out_path);
  manifest.write(out_path.string() + ".manifest.json");
  emit_warnings(warnings);
  note(global, "predicted arc: " + std::to_string(arc.points.size()) + " points (" +
                   std::to_string(arc.present_count()) + " present) -> " + out_path.string());
  return 0;
}

struct OracleArgs {
  SchemaOpts schema;
  std::string input;
  double accuracy = 1.0;
  std::string labels = "-3..3";
  std::uint64_t seed = 0;
  std::string order = "file";
  std::string out;
};

int run_oracle(const GlobalOpts& global, const OracleArgs& args) {
  Manifest manifest = make_manifest("oracle");
  manifest.add_input(args.input);
  auto stream = load_dataset(args.input, to_schema(args.schema));
  if (args.order == "gold") stream = order_by_gold(std::move(stream));
  const auto label_set = parse_label_set(args.labels);
  const auto predictions = oracle_labels(stream, {args.accuracy, label_set, args.seed});

  const auto out_path = resolve_out(global, args.out, "oracle.tsv");
  write_dataset_tsv(out_path, stream, predictions);
  manifest.set_params({{"accuracy", args.accuracy},
                       {"labels", args.labels},
                       {"order", args.order},
                       {"random_baseline", random_baseline(label_set)}});
  manifest.set_seed(args.seed);
  manifest.add_output(out_path);
  manifest.write(out_path.string() + ".manifest.json");
  note(global, "oracle labeled " + std::to_string(predictions.size()) + " instances at accuracy " +
                   format_double(args.accuracy) + " -> " + out_path.string());
  return 0;
}

struct DynamicArgs {
  SchemaOpts schema;
  std::string input;
  std::size_t crests = 200;
  std::size_t troughs = 200;
  std::string amp = "0.5:3.0";
  std::string width = "20:400";
  std::size_t knn = 10;
  std::size_t gold_bin = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int run_dynamic(const GlobalOpts& global, const DynamicArgs& args) {
  Manifest manifest = make_manifest("dynamic");
  manifest.add_input(args.input);
  const auto stream = load_dataset(args.input, to_schema(args.schema));

  WaveSpec spec;
  spec.n_crests = args.crests;
  spec.n_troughs = args.troughs;
  const auto amp = parse_pair(args.amp, "--amp");
  spec.amplitude_range = {amp.first, amp.second};
  const auto width = parse_pair(args.width, "--width");
  spec.width_min = static_cast<std::size_t>(width.first);
  spec.width_max = static_cast<std::size_t>(width.second);
  spec.neighbors = args.knn;
  spec.seed = args.seed;

  const auto result = synthesize_dynamic(stream, spec, parse_bin(args.gold_bin, "rolling"));

  const auto out_path = resolve_out(global, args.out, "dynamic.tsv");
  std::vector<double> golds;
  golds.reserve(result.stream.size());
  for (const auto& inst : result.stream) golds.push_back(*inst.gold);
  write_dataset_tsv(out_path, result.stream, golds);

  manifest.set_params({{"crests", args.crests},
                       {"troughs", args.troughs},
                       {"amp", args.amp},
                       {"width", args.width},
                       {"knn", args.knn},
                       {"gold_bin", args.gold_bin},
                       {"target_crests", result.target_extrema.crests},
                       {"target_troughs", result.target_extrema.troughs},
                       {"gold_arc_crests", result.gold_extrema.crests},
                       {"gold_arc_troughs", result.gold_extrema.troughs}});
  manifest.set_seed(args.seed);
  manifest.add_output(out_path);
  manifest.write(out_path.string() + ".manifest.json");
  note(global, "dynamic stream: " + std::to_string(result.stream.size()) +
                   " instances; trajectory extrema " + std::to_string(result.target_extrema.crests) +
                   " crests / " + std::to_string(result.target_extrema.troughs) +
                   " troughs; realized gold-arc extrema " + std::to_string(result.gold_extrema.crests) +
                   " / " + std::to_string(result.gold_extrema.troughs) + " -> " + out_path.string());
  return 0;
}

struct EvalArgs {
  std::string pred;
  std::string gold;
  std::string out;
};

int run_eval(const GlobalOpts& global, const EvalArgs& args) {
  Manifest manifest = make_manifest("eval");
  manifest.add_input(args.pred);
  manifest.add_input(args.gold);
  const auto pred = read_arc_csv(fs::path(args.pred));
  const auto gold = read_arc_csv(fs::path(args.gold));
  const auto report = evaluate(pred, gold);

  const nlohmann::json j = report;
  if (args.out.empty()) {
    if (global.json) {
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "rho: " << format_double(report.rho) << "\n";
      std::cout << "points: " << report.n_points << "\n";
      std::cout << "excluded: " << report.n_excluded << "\n";
      std::cout << "tie handling: " << kTieHandling << "\n";
    }
  } else {
    const auto out_path = resolve_out(global, args.out, "eval.json");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path.string());
    out << j.dump(2) << "\n";
    manifest.add_output(out_path);
    manifest.write(out_path.string() + ".manifest.json");
    std::cout << "rho: " << format_double(report.rho) << " (" << report.n_points
              << " points) -> " << out_path.string() << "\n";
  }
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out;
  std::size_t jobs = 1;
};

int run_sweep_cmd(const GlobalOpts& global, const SweepArgs& args) {
  Manifest manifest = make_manifest("sweep");
  manifest.add_input(args.config);
  const auto cfg = SweepConfig::load(args.config);
  const fs::path out_dir =
      !args.out.empty() ? fs::path(args.out)
                        : (global.out_dir.empty() ? cfg.out_dir : global.out_dir / cfg.out_dir);
  const auto results = run_sweep(cfg, out_dir, args.jobs, global.quiet ? nullptr : &std::cerr);

  std::size_t errored = 0;
  for (const auto& r : results) errored += r.report ? 0 : 1;
  for (const auto& ds : cfg.datasets) manifest.add_input(ds.path);
  for (const auto& lx : cfg.lexicons) {
    manifest.add_input(lx.path);
    if (lx.fallback_path) manifest.add_input(*lx.fallback_path);
  }
  manifest.set_params({{"cells", results.size()}, {"errored", errored}, {"jobs", args.jobs}});
  manifest.set_seed(cfg.base_seed);
  manifest.add_output(out_dir / "results.csv");
  manifest.add_output(out_dir / "summary.csv");
  manifest.write(out_dir / "manifest.json");
  note(global, "sweep: " + std::to_string(results.size()) + " cells, " + std::to_string(errored) +
                   " errored -> " + out_dir.string());
  return errored == 0 ? 0 : 1;
}

struct PlotArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::string title;
  std::string out;
};

int run_plot(const GlobalOpts& global, const PlotArgs& args) {
  Manifest manifest = make_manifest("plot");
  std::vector<ChartSeries> series;
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    manifest.add_input(args.inputs[i]);
    ChartSeries s;
    s.arc = read_arc_csv(fs::path(args.inputs[i]));
    s.label = i < args.labels.size() ? args.labels[i] : fs::path(args.inputs[i]).stem().string();
    series.push_back(std::move(s));
  }
  ChartOptions opts;
  opts.title = args.title;
  const auto svg = render_arc_chart(series, opts);

  const auto out_path = resolve_out(global, args.out, "plot.svg");
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + out_path.string());
  out << svg;
  manifest.set_params({{"title", args.title}, {"series", series.size()}});
  manifest.add_output(out_path);
  manifest.write(out_path.string() + ".manifest.json");
  note(global, "plot: " + std::to_string(series.size()) + " arc(s) -> " + out_path.string());
  return 0;
}

void attach_prep_opts(CLI::App* cmd, PreprocessOptions& prep) {
  cmd->add_flag_callback("--keep-urls", [&prep]() { prep.strip_urls = false; },
                         "do not remove URL tokens");
  cmd->add_flag_callback("--keep-numbers", [&prep]() { prep.strip_numbers = false; },
                         "do not remove number tokens");
  cmd->add_flag_callback("--keep-markers", [&prep]() { prep.strip_markers = false; },
                         "do not strip @/# markers");
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (i > 0) g_argv_line += ' ';
    g_argv_line += argv[i];
  }

  CLI::App app{"emotion arcs from ordered text streams: lexicon scoring, binning, "
               "oracle simulation, and rank-correlation evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GlobalOpts global;
  if (const char* env = std::getenv("EMOARCS_OUT_DIR")) global.out_dir = env;
  app.add_flag("--json", global.json, "emit tabular outputs as line-delimited JSON");
  app.add_flag("--quiet", global.quiet, "suppress progress notes on stderr");
  app.add_option("--out-dir", global.out_dir,
                 "default output directory (env: EMOARCS_OUT_DIR)");

  // lexicon validate
  auto* lexicon_cmd = app.add_subcommand("lexicon", "lexicon utilities");
  lexicon_cmd->require_subcommand(1);
  LexiconValidateArgs lv;
  auto* validate_cmd = lexicon_cmd->add_subcommand("validate", "validate a lexicon TSV file");
  validate_cmd->add_option("path", lv.path, "lexicon file")->required();
  validate_cmd->add_option("--kind", lv.kind)->check(CLI::IsMember({"cat", "cont"}));
  validate_cmd->add_option("--range", lv.range, "declared score range lo..hi");
  validate_cmd->add_option("--emotion", lv.emotion);

  // score
  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "score instances against a lexicon chain");
  attach_lex_opts(score_cmd, score_args.lex);
  attach_schema_opts(score_cmd, score_args.schema);
  attach_prep_opts(score_cmd, score_args.prep);
  score_cmd->add_option("--input", score_args.input, "dataset file")->required();
  score_cmd->add_option("--oov", score_args.oov)->check(CLI::IsMember({"skip", "zero"}));
  score_cmd->add_option("--out", score_args.out, "output CSV path");

  // gold
  GoldArgs gold_args;
  auto* gold_cmd = app.add_subcommand("gold", "gold arc from labeled instances");
  attach_schema_opts(gold_cmd, gold_args.schema);
  gold_cmd->add_option("--input", gold_args.input, "dataset file")->required();
  gold_cmd->add_option("--bin", gold_args.bin, "bin size B");
  gold_cmd->add_option("--mode", gold_args.mode)->check(CLI::IsMember({"rolling", "tumbling"}));
  gold_cmd->add_option("--order", gold_args.order, "instance order before binning")
      ->check(CLI::IsMember({"file", "gold"}));
  gold_cmd->add_flag("--standardize", gold_args.do_standardize,
                     "zero-mean unit-variance output");
  gold_cmd->add_option("--out", gold_args.out, "output CSV path");

  // arc
  ArcArgs arc_args;
  auto* arc_cmd = app.add_subcommand("arc", "lexicon-predicted arc from a text stream");
  attach_lex_opts(arc_cmd, arc_args.lex);
  attach_schema_opts(arc_cmd, arc_args.schema);
  attach_prep_opts(arc_cmd, arc_args.prep);
  arc_cmd->add_option("--input", arc_args.input, "dataset file")->required();
  arc_cmd->add_option("--oov", arc_args.oov)->check(CLI::IsMember({"skip", "zero"}));
  arc_cmd->add_option("--pooling", arc_args.pooling)
      ->check(CLI::IsMember({"instance", "word"}));
  arc_cmd->add_option("--bin", arc_args.bin, "bin size B");
  arc_cmd->add_option("--mode", arc_args.mode)->check(CLI::IsMember({"rolling", "tumbling"}));
  arc_cmd->add_option("--order", arc_args.order)->check(CLI::IsMember({"file", "gold"}));
  arc_cmd->add_flag("--standardize", arc_args.do_standardize);
  arc_cmd->add_option("--out", arc_args.out, "output CSV path");

  // oracle
  OracleArgs oracle_args;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "simulate an instance classifier at a target accuracy");
  attach_schema_opts(oracle_cmd, oracle_args.schema);
  oracle_cmd->add_option("--input", oracle_args.input, "labeled dataset file")->required();
  oracle_cmd->add_option("--accuracy", oracle_args.accuracy, "target accuracy in [0,1]")
      ->required();
  oracle_cmd->add_option("--labels", oracle_args.labels,
                         "label set: lo..hi integers or comma list");
  oracle_cmd->add_option("--seed", oracle_args.seed);
  oracle_cmd->add_option("--order", oracle_args.order)->check(CLI::IsMember({"file", "gold"}));
  oracle_cmd->add_option("--out", oracle_args.out,
                         "output dataset path (text + predicted label)");

  // dynamic
  DynamicArgs dynamic_args;
  auto* dynamic_cmd =
      app.add_subcommand("dynamic", "synthesize a dynamic stream by resampling a dataset");
  attach_schema_opts(dynamic_cmd, dynamic_args.schema);
  dynamic_cmd->add_option("--input", dynamic_args.input, "labeled dataset file")->required();
  dynamic_cmd->add_option("--crests", dynamic_args.crests);
  dynamic_cmd->add_option("--troughs", dynamic_args.troughs);
  dynamic_cmd->add_option("--amp", dynamic_args.amp,
                          "amplitude range lo:hi (standardized units)");
  dynamic_cmd->add_option("--width", dynamic_args.width,
                          "segment width range lo:hi (instances)");
  dynamic_cmd->add_option("--knn", dynamic_args.knn, "sample among the k nearest gold labels");
  dynamic_cmd->add_option("--gold-bin", dynamic_args.gold_bin,
                          "bin size of the reported dynamic gold arc");
  dynamic_cmd->add_option("--seed", dynamic_args.seed);
  dynamic_cmd->add_option("--out", dynamic_args.out, "output dataset path");

  // eval
  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Spearman correlation between two arcs");
  eval_cmd->add_option("--pred", eval_args.pred, "predicted arc CSV")->required();
  eval_cmd->add_option("--gold", eval_args.gold, "gold arc CSV")->required();
  eval_cmd->add_option("--out", eval_args.out, "write the report as JSON here");

  // sweep
  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid from a config file");
  sweep_cmd->add_option("--config", sweep_args.config, "sweep config file")->required();
  sweep_cmd->add_option("--out", sweep_args.out, "results directory");
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "parallel workers for cells");

  // plot
  PlotArgs plot_args;
  auto* plot_cmd = app.add_subcommand("plot", "render arcs as a standalone SVG chart");
  plot_cmd->add_option("--in", plot_args.inputs, "arc CSV file(s)")->required()->expected(-1);
  plot_cmd->add_option("--labels", plot_args.labels, "legend labels (default: file stems)")
      ->expected(-1);
  plot_cmd->add_option("--title", plot_args.title);
  plot_cmd->add_option("--out", plot_args.out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    if (validate_cmd->parsed()) return run_lexicon_validate(lv);
    if (score_cmd->parsed()) return run_score(global, score_args);
    if (gold_cmd->parsed()) return run_gold(global, gold_args);
    if (arc_cmd->parsed()) return run_arc(global, arc_args);
    if (oracle_cmd->parsed()) return run_oracle(global, oracle_args);
    if (dynamic_cmd->parsed()) return run_dynamic(global, dynamic_args);
    if (eval_cmd->parsed()) return run_eval(global, eval_args);
    if (sweep_cmd->parsed()) return run_sweep_cmd(global, sweep_args);
    if (plot_cmd->parsed()) return run_plot(global, plot_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
