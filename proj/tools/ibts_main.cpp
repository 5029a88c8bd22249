// ibts - interval sequence classification toolkit.
//
// Subcommands:
//   extract  events+classes CSV -> feature matrix CSV (+ selection report)
//   cv       events+classes CSV -> stratified k-fold CV report
//   synth    planted-rule generator -> events+classes CSV

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ibts/classify.hpp"
#include "ibts/features.hpp"
#include "ibts/ingest.hpp"
#include "ibts/parallel.hpp"
#include "ibts/synth.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct CommonOpts {
  std::string events_path;
  std::string classes_path;
  std::string representation = "combined";
  double epsilon = 0.0;
  int workers = 0;  // 0 = available parallelism
};

struct ForestOpts {
  int trees = 500;
  int depth = 0;  // 0 = unlimited
  int min_leaf = 1;
  int mtry = 0;  // 0 = sqrt default
  std::uint64_t seed = 42;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ibts::IoError("cannot open input file '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ibts::IoError("cannot open output file '" + path + "'");
  return out;
}

ibts::Dataset load_dataset(const CommonOpts& opts) {
  auto events = open_input(opts.events_path);
  auto classes = open_input(opts.classes_path);
  return ibts::parse_dataset(events, classes);
}

ibts::FeatureMatrix build_matrix(const ibts::Dataset& d,
                                 const std::string& representation,
                                 int workers) {
  if (representation == "relfreq") return ibts::build_relfreq_matrix(d, workers);
  if (representation == "temporal") return ibts::build_temporal_matrix(d, workers);
  if (representation == "combined") return ibts::build_combined_matrix(d, workers);
  throw ibts::ParamError("unknown representation '" + representation +
                         "' (expected relfreq, temporal, or combined)");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void echo_config(const std::string& line) { std::cerr << line << '\n'; }

int run_extract(const CommonOpts& opts, const std::string& out_path,
                const std::string& report_path) {
  echo_config("config: subcommand=extract events=" + opts.events_path +
              " classes=" + opts.classes_path +
              " representation=" + opts.representation +
              " epsilon=" + ibts::display_round(opts.epsilon, 4) +
              " out=" + out_path + " report=" + report_path +
              " workers=" + std::to_string(opts.workers));

  const ibts::Dataset dataset = load_dataset(opts);
  const ibts::SelectionReport selection =
      ibts::select_labels(dataset, opts.epsilon);
  const ibts::FeatureMatrix matrix = ibts::apply_selection(
      build_matrix(dataset, opts.representation, opts.workers), selection);

  auto out = open_output(out_path);
  ibts::write_feature_matrix(matrix, out);
  if (!report_path.empty()) {
    auto report = open_output(report_path);
    ibts::write_selection_report(selection, report);
  }

  std::cout << "sequences: " << dataset.size() << '\n'
            << "labels_total: " << dataset.alphabet().size() << '\n'
            << "labels_kept: " << selection.kept_labels().size() << '\n'
            << "features_written: " << matrix.column_count() << '\n';
  return 0;
}

int run_cv(const CommonOpts& opts, const ForestOpts& forest, int folds,
           const std::string& out_path, const std::string& report_path,
           bool timing) {
  echo_config("config: subcommand=cv events=" + opts.events_path +
              " classes=" + opts.classes_path +
              " representation=" + opts.representation +
              " epsilon=" + ibts::display_round(opts.epsilon, 4) +
              " folds=" + std::to_string(folds) +
              " trees=" + std::to_string(forest.trees) +
              " depth=" + std::to_string(forest.depth) +
              " min_leaf=" + std::to_string(forest.min_leaf) +
              " mtry=" + std::to_string(forest.mtry) +
              " seed=" + std::to_string(forest.seed) +
              " out=" + out_path + " report=" + report_path +
              " timing=" + (timing ? "1" : "0") +
              " workers=" + std::to_string(opts.workers));

  const ibts::Dataset dataset = load_dataset(opts);

  const auto extract_start = std::chrono::steady_clock::now();
  const ibts::SelectionReport selection =
      ibts::select_labels(dataset, opts.epsilon);
  const ibts::FeatureMatrix full =
      build_matrix(dataset, opts.representation, opts.workers);
  const ibts::FeatureMatrix matrix = ibts::apply_selection(full, selection);
  const double extract_seconds = seconds_since(extract_start);

  ibts::ForestParams params;
  params.tree_count = forest.trees;
  params.max_depth = forest.depth;
  params.min_leaf = forest.min_leaf;
  params.candidate_features = forest.mtry;
  params.seed = forest.seed;

  const auto cv_start = std::chrono::steady_clock::now();
  ibts::CVReport report =
      ibts::cross_validate(matrix, params, folds, forest.seed, opts.workers);
  const double cv_seconds = seconds_since(cv_start);

  report.representation = opts.representation;
  report.epsilon = opts.epsilon;
  report.labels_total = dataset.alphabet().size();
  report.labels_kept = selection.kept_labels().size();
  report.features_before = full.column_count();
  report.features_after = matrix.column_count();

  ibts::write_cv_report(report, std::cout);
  if (timing) {
    std::cout << "timing_extract_seconds: " << extract_seconds << '\n'
              << "timing_cv_seconds: " << cv_seconds << '\n';
  }
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    ibts::write_cv_report_csv(report, out);
  }
  if (!report_path.empty()) {
    auto sel = open_output(report_path);
    ibts::write_selection_report(selection, sel);
  }
  return 0;
}

ibts::PlantedRule parse_rule(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  ibts::PlantedRule rule;
  if (parts.size() == 2 && parts[0] == "presence") {
    rule.kind = ibts::PlantedRule::Kind::presence;
    rule.label1 = parts[1];
    return rule;
  }
  if (parts.size() == 4 && parts[0] == "relation") {
    rule.kind = ibts::PlantedRule::Kind::relation;
    rule.label1 = parts[1];
    rule.label2 = parts[2];
    auto rel = ibts::relation_from_token(parts[3]);
    if (!rel || *rel == ibts::Relation::none) {
      throw ibts::ParamError("unknown relation token '" + parts[3] + "'");
    }
    rule.relation = *rel;
    return rule;
  }
  if (parts.size() == 3 && parts[0] == "freq") {
    rule.kind = ibts::PlantedRule::Kind::frequency;
    rule.label1 = parts[1];
    try {
      rule.threshold = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw ibts::ParamError("bad frequency threshold '" + parts[2] + "'");
    }
    return rule;
  }
  throw ibts::ParamError(
      "bad rule '" + text +
      "' (expected presence:<label>, relation:<l1>:<l2>:<rel>, or "
      "freq:<label>:<threshold>)");
}

std::string describe_rule(const ibts::PlantedRule& rule) {
  switch (rule.kind) {
    case ibts::PlantedRule::Kind::presence:
      return "presence:" + rule.label1;
    case ibts::PlantedRule::Kind::relation:
      return "relation:" + rule.label1 + ":" + rule.label2 + ":" +
             std::string(ibts::relation_token(rule.relation));
    case ibts::PlantedRule::Kind::frequency:
      return "freq:" + rule.label1 + ":" +
             ibts::display_round(rule.threshold, 4);
  }
  return "?";
}

int run_synth(const ibts::SynthSpec& spec, const std::string& events_path,
              const std::string& classes_path, int workers) {
  echo_config("config: subcommand=synth rule=" + describe_rule(spec.rule) +
              " n=" + std::to_string(spec.sequence_count) +
              " alphabet=" + std::to_string(spec.alphabet_size) +
              " min_intervals=" + std::to_string(spec.min_intervals) +
              " max_intervals=" + std::to_string(spec.max_intervals) +
              " horizon=" + std::to_string(spec.horizon) +
              " noise=" + ibts::display_round(spec.noise, 4) +
              " seed=" + std::to_string(spec.seed) + " events=" + events_path +
              " classes=" + classes_path +
              " workers=" + std::to_string(workers));

  const ibts::Dataset dataset = ibts::generate(spec, workers);
  auto events = open_output(events_path);
  auto classes = open_output(classes_path);
  ibts::write_dataset(dataset, events, classes);

  std::size_t pos = 0;
  for (const auto& c : dataset.classes()) pos += c == "pos" ? 1 : 0;
  std::cout << "sequences: " << dataset.size() << '\n'
            << "alphabet_size: " << dataset.alphabet().size() << '\n'
            << "rule: " << describe_rule(spec.rule) << '\n'
            << "class_balance: " << pos << " pos / "
            << dataset.size() - pos << " neg\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval-based temporal sequence classification toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  ForestOpts forest;
  int folds = 10;
  std::string out_path;
  std::string report_path;
  bool timing = false;

  auto add_common = [&](CLI::App* cmd, bool need_out) {
    cmd->add_option("--events", common.events_path, "events CSV path")
        ->required();
    cmd->add_option("--classes", common.classes_path, "classes CSV path")
        ->required();
    cmd->add_option("--representation", common.representation,
                    "relfreq | temporal | combined")
        ->check(CLI::IsMember({"relfreq", "temporal", "combined"}));
    cmd->add_option("--epsilon", common.epsilon,
                    "support filter threshold in [0, 0.5)");
    cmd->add_option("--workers", common.workers,
                    "worker threads (0 = available parallelism)");
    auto* out =
        cmd->add_option("--out", out_path, "output CSV path");
    if (need_out) out->required();
    cmd->add_option("--report", report_path, "selection report CSV path");
  };

  auto* extract = app.add_subcommand(
      "extract", "write the selected feature matrix as CSV");
  add_common(extract, true);

  auto* cv = app.add_subcommand(
      "cv", "stratified k-fold cross-validation with the built-in forest");
  add_common(cv, false);
  cv->add_option("--folds", folds, "fold count (default 10)");
  cv->add_option("--trees", forest.trees, "trees in the forest (default 500)");
  cv->add_option("--depth", forest.depth, "max tree depth (0 = unlimited)");
  cv->add_option("--min-leaf", forest.min_leaf, "minimum rows per leaf");
  cv->add_option("--mtry", forest.mtry,
                 "features tried per split (0 = sqrt of encoded count)");
  cv->add_option("--seed", forest.seed, "master seed (default 42)");
  cv->add_flag("--timing", timing, "print extraction and CV wall times");

  auto* synth = app.add_subcommand(
      "synth", "generate a planted-rule dataset in the events/classes format");
  ibts::SynthSpec spec;
  std::string rule_text = "presence:F";
  std::string synth_events = "events.csv";
  std::string synth_classes = "classes.csv";
  int synth_workers = 0;
  synth->add_option("--rule", rule_text,
                    "presence:<l> | relation:<l1>:<l2>:<rel> | "
                    "freq:<l>:<threshold>");
  synth->add_option("--n", spec.sequence_count, "sequence count");
  synth->add_option("--alphabet", spec.alphabet_size, "alphabet size");
  synth->add_option("--min-intervals", spec.min_intervals,
                    "min base intervals per sequence");
  synth->add_option("--max-intervals", spec.max_intervals,
                    "max base intervals per sequence");
  synth->add_option("--horizon", spec.horizon, "time horizon");
  synth->add_option("--noise", spec.noise, "class flip probability [0, 1)");
  synth->add_option("--seed", spec.seed, "master seed");
  synth->add_option("--events", synth_events, "events CSV output path");
  synth->add_option("--classes", synth_classes, "classes CSV output path");
  synth->add_option("--workers", synth_workers,
                    "worker threads (0 = available parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (extract->parsed()) {
      return run_extract(common, out_path, report_path);
    }
    if (cv->parsed()) {
      return run_cv(common, forest, folds, out_path, report_path, timing);
    }
    if (synth->parsed()) {
      spec.rule = parse_rule(rule_text);
      return run_synth(spec, synth_events, synth_classes, synth_workers);
    }
  } catch (const ibts::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
