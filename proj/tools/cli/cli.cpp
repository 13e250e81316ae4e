/*
 * Copyright 2026 The XMentor Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xmentor/aggregate.hpp"
#include "xmentor/io.hpp"
#include "xmentor/metrics.hpp"
#include "xmentor/model.hpp"
#include "xmentor/synth.hpp"

namespace xmentor::cli {
namespace {

namespace fs = std::filesystem;

enum class Format { kHuman, kMachine };

// Usage problems detected after CLI11 parsing (exit 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::vector<std::string> inputs;
  bool use_stdin = false;
  bool use_stdout = false;
  std::string output;
  Format format = Format::kHuman;
  std::optional<std::size_t> k;
  std::string config_path;
  std::string pair;
  std::optional<double> neutral_eps;
  bool trace = false;

  // synth
  std::uint64_t seed = 1;
  std::size_t count = 10;
  std::string features = "3:6";
  std::size_t explainers = 3;
  std::string perturbation = "independent";
  double scale = 1.0;
};

void add_io_options(CLI::App& sub, Options& options, bool needs_input) {
  if (needs_input) {
    sub.add_option("-i,--input", options.inputs,
                   "Input document(s): xmentor/1 JSON, corpus array, "
                   "newline-delimited documents, or .csv table");
    sub.add_flag("--stdin", options.use_stdin, "Read one input from stdin");
  }
  sub.add_option("-o,--output", options.output, "Output file (directory for "
                                                "report)");
  sub.add_flag("--stdout", options.use_stdout, "Write to standard output");
  const std::map<std::string, Format> formats{{"human", Format::kHuman},
                                              {"machine", Format::kMachine}};
  sub.add_option("--format", options.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_engine_options(CLI::App& sub, Options& options) {
  sub.add_option("-k,--k", options.k, "Top-k override (default: threshold)")
      ->check(CLI::PositiveNumber);
  sub.add_option("--config", options.config_path,
                 "Aggregation config (JSON)")
      ->check(CLI::ExistingFile);
  sub.add_option("--neutral-eps", options.neutral_eps,
                 "|weight| <= eps counts as neutral")
      ->check(CLI::NonNegativeNumber);
}

std::string read_stream(std::istream& stream) {
  return {std::istreambuf_iterator<char>(stream),
          std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw Error("cannot read '" + path + "'");
  return read_stream(stream);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool is_csv(const std::string& path) {
  return fs::path(path).extension() == ".csv";
}

struct Loaded {
  std::vector<ExplanationSet> sets;
};

Loaded load_inputs(const Options& options, std::istream& in, bool validated) {
  if (options.inputs.empty() && !options.use_stdin) {
    throw UsageError("no input: pass --input PATH or --stdin");
  }
  if (!options.inputs.empty() && options.use_stdin) {
    throw UsageError("--input and --stdin are mutually exclusive");
  }
  Loaded loaded;
  auto add = [&](const std::string& text, bool csv, const std::string& name) {
    try {
      std::vector<ExplanationSet> sets;
      if (csv) {
        sets = import_table(text);
        if (validated) {
          for (const auto& set : sets) require_valid(set);
        }
      } else {
        sets = validated ? parse_corpus(text) : parse_corpus_unvalidated(text);
      }
      for (auto& set : sets) loaded.sets.push_back(std::move(set));
    } catch (const ParseError& e) {
      throw Error(name + ": " + std::string(to_string(e.kind())) + ": " +
                  e.what());
    } catch (const Error& e) {
      throw Error(name + ": " + e.what());
    }
  };
  if (options.use_stdin) {
    add(read_stream(in), false, "<stdin>");
  }
  for (const auto& path : options.inputs) {
    add(read_file(path), is_csv(path), path);
  }
  return loaded;
}

AggregationConfig load_config(const Options& options) {
  AggregationConfig config;
  if (!options.config_path.empty()) {
    try {
      config = parse_config(read_file(options.config_path));
    } catch (const Error& e) {
      throw Error(options.config_path + ": " + e.what());
    }
  }
  if (options.neutral_eps) config.neutral_eps = *options.neutral_eps;
  config.check();
  return config;
}

// Writes `text` to --output when given, else to `out`.
void emit(const Options& options, std::ostream& out, const std::string& text) {
  if (options.output.empty() || options.use_stdout) {
    out << text;
    return;
  }
  std::ofstream file(options.output, std::ios::binary);
  if (!file) throw Error("cannot write '" + options.output + "'");
  file << text;
}

std::string joined(const std::vector<std::string>& items,
                   std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string joined(const std::vector<RankedFeature>& items) {
  std::vector<std::string> parts;
  for (const auto& item : items) {
    parts.push_back(fmt::format("{}@{}", item.feature, item.consensus_rank));
  }
  return joined(parts);
}

std::vector<std::string> restored(const std::vector<std::string>& before,
                                  const std::vector<std::string>& after) {
  std::vector<std::string> out;
  for (const auto& name : after) {
    if (std::find(before.begin(), before.end(), name) == before.end()) {
      out.push_back(name);
    }
  }
  return out;
}

std::vector<std::string> names(const std::vector<RankedFeature>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) out.push_back(item.feature);
  return out;
}

// ---------------------------------------------------------------------------
// validate

int run_validate(const Options& options, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  const Loaded loaded = load_inputs(options, in, false);
  std::vector<InstanceFindings> results;
  bool failed = false;
  for (const auto& set : loaded.sets) {
    InstanceFindings entry{set.instance_id, validate(set)};
    failed = failed || has_errors(entry.findings);
    results.push_back(std::move(entry));
  }

  if (options.format == Format::kMachine) {
    emit(options, out,
         results.size() == 1 ? write_findings(results.front())
                             : write_findings(results));
  } else {
    std::ostringstream text;
    for (const auto& entry : results) {
      fmt::print(text, "{}: {}\n", entry.instance_id,
                 has_errors(entry.findings) ? "INVALID" : "valid");
      for (const auto& finding : entry.findings) {
        fmt::print(text, "  {}\n", describe(finding));
      }
    }
    emit(options, out, text.str());
  }
  if (failed) fmt::print(err, "validation failed\n");
  return failed ? kExitFailure : kExitOk;
}

// ---------------------------------------------------------------------------
// metrics

std::pair<std::string, std::string> split_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw UsageError("--pair expects A:B, got '" + text + "'");
  }
  return {text.substr(0, colon), text.substr(colon + 1)};
}

InstanceMetrics compute_metrics(const ExplanationSet& set,
                                const Options& options,
                                const AggregationConfig& config) {
  InstanceMetrics result;
  result.instance_id = set.instance_id;
  result.k = options.k ? *options.k
                       : threshold_k(set.feature_universe().size(), config);
  const double eps = config.neutral_eps;
  if (!options.pair.empty()) {
    const auto [a, b] = split_pair(options.pair);
    const Explanation& first = set.explanation(a);
    const Explanation& second = set.explanation(b);
    result.pairs.push_back(
        PairReport{a, b, pair_metrics(first, second, result.k, eps)});
    return result;
  }
  result.pairs = pair_reports(set, result.k, eps);
  for (const Metric metric : {Metric::kFeature, Metric::kRank, Metric::kSign}) {
    result.matrices.push_back(pairwise_matrix(set, result.k, metric, eps));
  }
  return result;
}

void print_metrics(std::ostream& text, const InstanceMetrics& metrics) {
  fmt::print(text, "instance {}  (k = {})\n", metrics.instance_id, metrics.k);
  fmt::print(text, "  {:<24} {:>6} {:>6} {:>6} {:>9} {:>9}\n", "pair", "FA",
             "RA", "SA", "k(FA-RA)", "k(FA-SA)");
  for (const auto& pair : metrics.pairs) {
    const PairMetrics& m = pair.metrics;
    fmt::print(text, "  {:<24} {:>6.3f} {:>6.3f} {:>6.3f} {:>9} {:>9}\n",
               pair.explainer_a + ":" + pair.explainer_b, m.fa, m.ra, m.sa,
               m.rank_mismatch_count, m.sign_mismatch_count);
  }
  for (const auto& matrix : metrics.matrices) {
    fmt::print(text, "  {} matrix\n", to_string(matrix.metric()));
    fmt::print(text, "    {:<12}", "");
    for (const auto& name : matrix.explainers()) {
      fmt::print(text, " {:>10}", name);
    }
    fmt::print(text, "\n");
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      fmt::print(text, "    {:<12}", matrix.explainers()[i]);
      for (std::size_t j = 0; j < matrix.size(); ++j) {
        fmt::print(text, " {:>10.3f}", matrix(i, j));
      }
      fmt::print(text, "\n");
    }
  }
}

int run_metrics(const Options& options, std::istream& in, std::ostream& out) {
  const AggregationConfig config = load_config(options);
  if (!options.pair.empty()) split_pair(options.pair);
  const Loaded loaded = load_inputs(options, in, true);
  std::vector<InstanceMetrics> results;
  for (const auto& set : loaded.sets) {
    results.push_back(compute_metrics(set, options, config));
  }
  if (options.format == Format::kMachine) {
    emit(options, out,
         results.size() == 1 ? write_metrics(results.front())
                             : write_metrics(results));
  } else {
    std::ostringstream text;
    for (const auto& result : results) print_metrics(text, result);
    emit(options, out, text.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// aggregate

void print_aggregation(std::ostream& text, const AggregatedExplanation& result) {
  const AggregationTrace& trace = result.trace;
  const std::size_t k = trace.k_used;
  fmt::print(text, "instance {}  (n = {}, k = {})\n", result.instance_id,
             trace.feature_count, k);
  fmt::print(text, "  {:<14} {:<6} {}\n", "stage", "fired", "features");
  fmt::print(text, "  {:<14} {:<6} k = f({}) = {}\n", "threshold", "",
             trace.feature_count, k);

  const bool short_rank = trace.strict_rank_set.size() < k;
  fmt::print(text, "  {:<14} {:<6} {}{}\n", "strict rank", "",
             joined(trace.strict_rank_set),
             short_rank ? fmt::format("  ({} < k)", trace.strict_rank_set.size())
                        : "");
  fmt::print(text, "  {:<14} {:<6} {}\n", "  blacklist", "",
             trace.blacklist.empty() ? "-" : joined(trace.blacklist));
  if (trace.fired(Mode::kLooseRank)) {
    fmt::print(text, "  {:<14} {:<6} {}  (restored {})\n", "loose rank", "yes",
               joined(trace.loose_rank_set),
               joined(restored(names(trace.strict_rank_set),
                               names(trace.loose_rank_set))));
  } else {
    fmt::print(text, "  {:<14} {:<6} -\n", "loose rank", "no");
  }
  const bool short_sign = trace.strict_sign_set.size() < k;
  fmt::print(text, "  {:<14} {:<6} {}{}\n", "strict sign", "",
             trace.strict_sign_set.empty() ? "-" : joined(trace.strict_sign_set),
             short_sign ? fmt::format("  ({} < k)", trace.strict_sign_set.size())
                        : "");
  std::size_t survivors = trace.strict_sign_set.size();
  if (trace.fired(Mode::kLooseSign)) {
    survivors = trace.loose_sign_set.size();
    fmt::print(text, "  {:<14} {:<6} {}  (restored {}; {} features)\n",
               "loose sign", "yes",
               trace.loose_sign_set.empty() ? "-"
                                            : joined(trace.loose_sign_set),
               joined(restored(trace.strict_sign_set, trace.loose_sign_set)),
               survivors);
  } else {
    fmt::print(text, "  {:<14} {:<6} -\n", "loose sign", "no");
  }
  fmt::print(text, "  {:<14} {:<6} keep top {} of {}\n", "final", "",
             result.features.size(), survivors);
  if (!trace.tie_break_ranks.empty()) {
    std::vector<std::string> ranks;
    for (const auto r : trace.tie_break_ranks) ranks.push_back(std::to_string(r));
    fmt::print(text, "  tie-break (mean rank, then name) decided ranks {}\n",
               joined(ranks, ", "));
  }
  if (!trace.note.empty()) fmt::print(text, "  note: {}\n", trace.note);

  fmt::print(text, "\n  {:>4}  {:<20} {:<4} {:>12} {:>8}  signs ({})\n", "rank",
             "feature", "sign", "mean_weight", "support",
             joined(result.explainers));
  for (const auto& entry : result.features) {
    std::string signs;
    for (const Sign sign : entry.explainer_signs) {
      if (!signs.empty()) signs += ' ';
      signs += sign_symbol(sign);
    }
    fmt::print(text, "  {:>4}  {:<20} {:<4} {:>12.4f} {:>8}  {}\n",
               entry.consensus_rank, entry.feature, sign_symbol(entry.sign),
               entry.mean_weight,
               fmt::format("{}/{}", entry.support, result.explainers.size()),
               signs);
  }
  fmt::print(text, "  final: {}\n", joined(result.feature_names(), ", "));
}

int run_aggregate(const Options& options, std::istream& in, std::ostream& out) {
  const AggregationConfig config = load_config(options);
  if (options.k) {
    throw UsageError("aggregate derives k from the feature count; use "
                     "--config to change the thresholds");
  }
  const Loaded loaded = load_inputs(options, in, true);
  std::vector<AggregatedExplanation> results;
  for (const auto& set : loaded.sets) {
    results.push_back(aggregate(set, config));
  }
  if (options.format == Format::kMachine) {
    emit(options, out,
         results.size() == 1 ? write_aggregation(results.front(), options.trace)
                             : write_aggregations(results, options.trace));
  } else {
    std::ostringstream text;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i > 0) text << "\n";
      print_aggregation(text, results[i]);
    }
    emit(options, out, text.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

std::string file_stem(const std::string& instance_id) {
  std::string out;
  for (const char c : instance_id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                      c == '_' || c == '.';
    out.push_back(safe ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  file << text;
}

int run_report(const Options& options, std::istream& in, std::ostream& out) {
  if (options.output.empty()) {
    throw UsageError("report requires --output DIR");
  }
  const AggregationConfig config = load_config(options);
  Loaded loaded = load_inputs(options, in, true);
  auto& sets = loaded.sets;
  std::stable_sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    return a.instance_id < b.instance_id;
  });
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (sets[i].instance_id == sets[i - 1].instance_id) {
      throw Error("duplicate instance_id '" + sets[i].instance_id +
                  "' in corpus");
    }
  }

  const fs::path dir(options.output);
  std::error_code ec;
  fs::create_directories(dir / "aggregations", ec);
  if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());

  const KPolicy policy = options.k ? KPolicy::Fixed(*options.k)
                                   : KPolicy::Threshold(config);
  const double eps = config.neutral_eps;

  struct Sums {
    double fa = 0, ra = 0, sa = 0, rank = 0, sign = 0;
    std::size_t count = 0;
  };
  std::map<std::pair<std::string, std::string>, Sums> sums;
  std::set<std::string> all_explainers;

  std::string pair_csv =
      "instance_id,explainer_a,explainer_b,k,fa,ra,sa,rank_mismatch_count,"
      "sign_mismatch_count\n";
  std::set<std::string> used_stems;
  for (const auto& set : sets) {
    const std::size_t k = policy.resolve(set);
    for (const auto& e : set.explanations) all_explainers.insert(e.explainer);
    // Diagonal entries feed the matrix tables.
    for (const auto& e : set.explanations) {
      const PairMetrics self = pair_metrics(e, e, k, eps);
      Sums& s = sums[{e.explainer, e.explainer}];
      s.fa += self.fa;
      s.ra += self.ra;
      s.sa += self.sa;
      ++s.count;
    }
    for (const auto& report : pair_reports(set, k, eps)) {
      const PairMetrics& m = report.metrics;
      pair_csv += fmt::format("{},{},{},{},{},{},{},{},{}\n",
                              csv_field(set.instance_id),
                              csv_field(report.explainer_a),
                              csv_field(report.explainer_b), m.k, m.fa, m.ra,
                              m.sa, m.rank_mismatch_count,
                              m.sign_mismatch_count);
      auto key = std::minmax(report.explainer_a, report.explainer_b);
      Sums& s = sums[{key.first, key.second}];
      s.fa += m.fa;
      s.ra += m.ra;
      s.sa += m.sa;
      s.rank += static_cast<double>(m.rank_mismatch_count);
      s.sign += static_cast<double>(m.sign_mismatch_count);
      ++s.count;
    }

    std::string stem = file_stem(set.instance_id);
    for (int suffix = 2; used_stems.contains(stem); ++suffix) {
      stem = file_stem(set.instance_id) + "-" + std::to_string(suffix);
    }
    used_stems.insert(stem);
    write_text(dir / "aggregations" / (stem + ".json"),
               write_aggregation(aggregate(set, config), true));
  }
  write_text(dir / "pair_metrics.csv", pair_csv);

  ReportSummary summary;
  summary.instances = sets.size();
  summary.histograms = corpus_histograms(sets, policy, eps);
  std::string means_csv =
      "explainer_a,explainer_b,instances,mean_fa,mean_ra,mean_sa,"
      "mean_rank_mismatch,mean_sign_mismatch\n";
  std::string hist_csv = "explainer_a,explainer_b,kind,count,frequency\n";
  for (const auto& entry : summary.histograms.pairs) {
    const Sums& s = sums.at({entry.explainer_a, entry.explainer_b});
    const double n = static_cast<double>(s.count);
    ReportSummary::PairMeans means{s.fa / n, s.ra / n, s.sa / n, s.rank / n,
                                   s.sign / n};
    summary.means.push_back(means);
    means_csv += fmt::format("{},{},{},{},{},{},{},{}\n",
                             csv_field(entry.explainer_a),
                             csv_field(entry.explainer_b), s.count, means.fa,
                             means.ra, means.sa, means.rank_mismatch,
                             means.sign_mismatch);
    for (const auto& [value, frequency] : entry.rank_mismatch) {
      hist_csv += fmt::format("{},{},rank,{},{}\n", csv_field(entry.explainer_a),
                              csv_field(entry.explainer_b), value, frequency);
    }
    for (const auto& [value, frequency] : entry.sign_mismatch) {
      hist_csv += fmt::format("{},{},sign,{},{}\n", csv_field(entry.explainer_a),
                              csv_field(entry.explainer_b), value, frequency);
    }
  }
  write_text(dir / "pairwise_means.csv", means_csv);
  write_text(dir / "histograms.csv", hist_csv);

  // Mean agreement matrices over the union of explainers; cells for pairs
  // that never co-occur are left empty.
  const std::vector<std::string> ids(all_explainers.begin(),
                                     all_explainers.end());
  for (const Metric metric : {Metric::kFeature, Metric::kRank, Metric::kSign}) {
    std::string text = "explainer";
    for (const auto& id : ids) text += "," + csv_field(id);
    text += "\n";
    for (const auto& row : ids) {
      text += csv_field(row);
      for (const auto& col : ids) {
        auto key = std::minmax(row, col);
        const auto it = sums.find({key.first, key.second});
        text += ",";
        if (it == sums.end() || it->second.count == 0) continue;
        const Sums& s = it->second;
        const double total =
            metric == Metric::kFeature ? s.fa
            : metric == Metric::kRank  ? s.ra
                                       : s.sa;
        text += fmt::format("{}", total / static_cast<double>(s.count));
      }
      text += "\n";
    }
    std::string name(to_string(metric));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    write_text(dir / ("matrix_" + name + ".csv"), text);
  }

  const std::string summary_json = write_report_summary(summary);
  write_text(dir / "summary.json", summary_json);

  if (options.format == Format::kMachine) {
    out << summary_json;
    return kExitOk;
  }
  fmt::print(out, "report for {} instance(s) written to {}\n", sets.size(),
             dir.string());
  fmt::print(out, "  {:<24} {:>5} {:>7} {:>7} {:>7} {:>9} {:>9}\n", "pair", "n",
             "FA", "RA", "SA", "k(FA-RA)", "k(FA-SA)");
  for (std::size_t i = 0; i < summary.histograms.pairs.size(); ++i) {
    const auto& entry = summary.histograms.pairs[i];
    const auto& means = summary.means[i];
    fmt::print(out, "  {:<24} {:>5} {:>7.3f} {:>7.3f} {:>7.3f} {:>9.3f} {:>9.3f}\n",
               entry.explainer_a + ":" + entry.explainer_b, entry.instances,
               means.fa, means.ra, means.sa, means.rank_mismatch,
               means.sign_mismatch);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const auto value = static_cast<std::size_t>(std::stoull(text));
      return {value, value};
    }
    return {static_cast<std::size_t>(std::stoull(text.substr(0, colon))),
            static_cast<std::size_t>(std::stoull(text.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw UsageError("--features expects N or MIN:MAX, got '" + text + "'");
  }
}

int run_synth(const Options& options, std::ostream& out) {
  GeneratorSpec spec;
  spec.seed = options.seed;
  std::tie(spec.min_features, spec.max_features) =
      parse_range(options.features);
  spec.n_explainers = options.explainers;
  const auto perturbation = parse_perturbation(options.perturbation);
  if (!perturbation) {
    throw UsageError("unknown --perturbation '" + options.perturbation + "'");
  }
  spec.perturbation = *perturbation;
  spec.weight_scale = options.scale;
  try {
    spec.check();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto corpus = generate(spec, options.count);
  emit(options, out, write_corpus(corpus));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"xmentor: rank-aware aggregation of feature-attribution "
               "explanations"};
  app.name("xmentor");
  app.require_subcommand(1);

  Options options;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check documents against the schema "
                                     "and invariants");
  add_io_options(*validate_cmd, options, true);

  auto* metrics_cmd =
      app.add_subcommand("metrics", "Pairwise FA/RA/SA and disagreement "
                                    "counts");
  add_io_options(*metrics_cmd, options, true);
  add_engine_options(*metrics_cmd, options);
  metrics_cmd->add_option("--pair", options.pair,
                          "Restrict to one explainer pair A:B");

  auto* aggregate_cmd =
      app.add_subcommand("aggregate", "Unified top-k explanation");
  add_io_options(*aggregate_cmd, options, true);
  add_engine_options(*aggregate_cmd, options);
  aggregate_cmd->add_flag("--trace", options.trace,
                          "Include the stage trace in machine output");

  auto* report_cmd = app.add_subcommand(
      "report", "Corpus metric tables, histograms and aggregations");
  add_io_options(*report_cmd, options, true);
  add_engine_options(*report_cmd, options);

  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a seeded synthetic corpus");
  add_io_options(*synth_cmd, options, false);
  synth_cmd->add_option("--seed", options.seed, "Random seed");
  synth_cmd->add_option("--count", options.count, "Number of instances");
  synth_cmd->add_option("--features", options.features,
                        "Feature count N or range MIN:MAX");
  synth_cmd->add_option("--explainers", options.explainers,
                        "Explainers per instance")
      ->check(CLI::Range(2, 64));
  synth_cmd->add_option("--perturbation", options.perturbation,
                        "independent | rank-jitter | sign-flip");
  synth_cmd->add_option("--scale", options.scale, "Weight scale")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (options.use_stdout && !options.output.empty() &&
      !report_cmd->parsed()) {
    fmt::print(err, "error: --stdout and --output are mutually exclusive\n");
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(options, in, out, err);
    if (metrics_cmd->parsed()) return run_metrics(options, in, out);
    if (aggregate_cmd->parsed()) return run_aggregate(options, in, out);
    if (report_cmd->parsed()) return run_report(options, in, out);
    if (synth_cmd->parsed()) return run_synth(options, out);
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace xmentor::cli
