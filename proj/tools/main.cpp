// Copyright 2026 The shifteval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line surface: evaluate, bound, verify against the oracle,
// aggregate TTA, simulate, and emit shift manifests. Data goes to stdout
// or --out; progress and timing go to stderr. Exit codes: 0 success,
// 2 input error, 3 resource/cap error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shifteval/bounds.hpp"
#include "shifteval/dataset.hpp"
#include "shifteval/evaluator.hpp"
#include "shifteval/parallel.hpp"
#include "shifteval/serialize.hpp"
#include "shifteval/simulate.hpp"
#include "shifteval/tta.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::ordered_json;
using namespace shifteval;

struct CommonOptions {
  int threads = default_thread_count();
  bool quiet = false;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--threads", opts->threads,
                  "Worker threads (default: SHIFTEVAL_THREADS or hardware)");
  cmd->add_flag("--quiet", opts->quiet, "Suppress progress output on stderr");
  cmd->add_option("--out", opts->out, "Write the JSON report to this file instead of stdout");
}

ordered_json report_envelope(const std::string& command) {
  ordered_json j;
  j["tool"] = "shifteval";
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

void emit_report(const ordered_json& report, const CommonOptions& opts) {
  const std::string text = report.dump(2) + "\n";
  if (opts.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opts.out, std::ios::binary);
    if (!f) throw InputError("cannot open file for writing: " + opts.out);
    f << text;
  }
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open file for writing: " + path);
  for (const auto& line : lines) f << line << "\n";
}

class StderrTimer {
 public:
  explicit StderrTimer(bool quiet) : quiet_(quiet), start_(std::chrono::steady_clock::now()) {}
  void note(const std::string& message) const {
    if (!quiet_) std::cerr << message << "\n";
  }
  ~StderrTimer() {
    if (quiet_) return;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    std::cerr << "done in " << elapsed.count() << " ms\n";
  }

 private:
  bool quiet_;
  std::chrono::steady_clock::time_point start_;
};

Shift parse_shift(const std::string& text) {
  int dx = 0, dy = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &dx, &dy, &extra) != 2) {
    throw InputError("bad shift '" + text + "', expected dx,dy");
  }
  return Shift{dx, dy};
}

// ---- eval ---------------------------------------------------------------

struct EvalOptions {
  CommonOptions common;
  std::string gt_path;
  std::string preds_path;
  int max_shift = 0;
  std::string frame = "shifted";
  std::string assignment_path;
  std::string shift_text;
};

int run_eval(const EvalOptions& o) {
  StderrTimer timer(o.common.quiet);
  const GroundTruth gt = load_ground_truth(o.gt_path);
  const ShiftGrid grid(o.max_shift);
  const PredictionFrame frame =
      o.frame == "canonical" ? PredictionFrame::kCanonical : PredictionFrame::kShifted;
  const ShiftedPredictionSet set = load_predictions(o.preds_path, grid, frame, gt);

  ShiftAssignment selection;
  if (!o.assignment_path.empty()) {
    selection = load_assignment(o.assignment_path);
  } else if (!o.shift_text.empty()) {
    const Shift s = parse_shift(o.shift_text);
    for (const auto& img : gt.images) selection[img.id] = s;
  } else {
    selection = zero_assignment(gt);
  }

  const EvalConfig config;
  const ApResult result = compute_ap(selection, set, gt, config);

  ordered_json report = report_envelope("eval");
  ordered_json cfg;
  cfg["gt"] = o.gt_path;
  cfg["preds"] = o.preds_path;
  cfg["max_shift"] = o.max_shift;
  cfg["frame"] = o.frame;
  if (!o.assignment_path.empty()) cfg["assignment"] = o.assignment_path;
  if (!o.shift_text.empty()) cfg["shift"] = o.shift_text;
  cfg["iou_thresholds"] = config.iou_thresholds;
  cfg["recall_points"] = config.recall_points;
  cfg["max_dets"] = config.max_dets;
  report["config"] = std::move(cfg);
  report["result"] = to_json(result);
  emit_report(report, o.common);
  return 0;
}

// ---- bounds -------------------------------------------------------------

struct BoundsOptions {
  CommonOptions common;
  std::string gt_path;
  std::string preds_path;
  int max_shift = 1;
  int iterations = 1;
  std::string direction = "both";
  std::string objective = "ap50";
  std::string label = "detector";
  std::string csv_path;
  bool allow_missing = false;
};

void check_complete(const ShiftedPredictionSet& set, bool allow_missing) {
  const std::vector<Shift> missing = set.missing_shifts();
  if (missing.empty() || allow_missing) return;
  std::ostringstream msg;
  msg << "incomplete prediction grid; missing cells:";
  for (const Shift s : missing) {
    for (const std::int64_t id : set.image_ids()) {
      msg << " (" << id << ", " << s.dx << "," << s.dy << ")";
    }
  }
  msg << " (use --allow-missing to treat them as empty)";
  throw InputError(msg.str());
}

int run_bounds(const BoundsOptions& o) {
  StderrTimer timer(o.common.quiet);
  const GroundTruth gt = load_ground_truth(o.gt_path);
  const ShiftGrid grid(o.max_shift);
  const ShiftedPredictionSet set =
      load_predictions(o.preds_path, grid, PredictionFrame::kShifted, gt);
  check_complete(set, o.allow_missing);

  const EvalConfig eval_config;
  GreedyConfig greedy_config;
  greedy_config.iterations = o.iterations;
  greedy_config.objective = o.objective == "map" ? Objective::kMeanAp : Objective::kAp50;

  ordered_json report = report_envelope("bounds");
  ordered_json cfg;
  cfg["gt"] = o.gt_path;
  cfg["preds"] = o.preds_path;
  cfg["max_shift"] = o.max_shift;
  cfg["iterations"] = o.iterations;
  cfg["direction"] = o.direction;
  cfg["objective"] = o.objective;
  cfg["label"] = o.label;
  cfg["allow_missing"] = o.allow_missing;
  cfg["iou_thresholds"] = eval_config.iou_thresholds;
  cfg["recall_points"] = eval_config.recall_points;
  cfg["max_dets"] = eval_config.max_dets;
  report["config"] = std::move(cfg);

  if (o.direction == "both") {
    timer.note("running greedy search in both directions");
    const BoundsResult bounds =
        compute_bounds(set, gt, eval_config, greedy_config, o.common.threads);
    report["bounds"] = to_json(bounds);
    if (!o.csv_path.empty()) {
      write_lines(o.csv_path,
                  {table1_csv_header(), table1_csv_row(make_table1_row(o.label, bounds))});
    }
  } else {
    const Direction dir = o.direction == "min" ? Direction::kMinimize : Direction::kMaximize;
    timer.note("running greedy search (" + o.direction + ")");
    const GreedyRunResult run =
        greedy_bounds(set, gt, eval_config, greedy_config, dir, o.common.threads);
    const ApResult baseline = compute_ap(zero_assignment(gt), set, gt, eval_config);
    ordered_json payload;
    payload["baseline"] = to_json(baseline);
    payload[dir == Direction::kMaximize ? "ap_best" : "ap_worst"] = to_json(run.ap);
    payload["eval_count"] = run.eval_count;
    payload["iterations_run"] = run.iterations_run;
    payload["objective_trace"] = run.objective_trace;
    payload["assignment"] = to_json(run.assignment);
    report["bounds"] = std::move(payload);
  }
  emit_report(report, o.common);
  return 0;
}

// ---- oracle -------------------------------------------------------------

struct OracleOptions {
  CommonOptions common;
  std::string gt_path;
  std::string preds_path;
  int max_shift = 1;
  int iterations = 1;
  std::uint64_t cap = 1000000;
};

int run_oracle(const OracleOptions& o) {
  StderrTimer timer(o.common.quiet);
  const GroundTruth gt = load_ground_truth(o.gt_path);
  const ShiftGrid grid(o.max_shift);
  const ShiftedPredictionSet set =
      load_predictions(o.preds_path, grid, PredictionFrame::kShifted, gt);

  const EvalConfig eval_config;
  GreedyConfig greedy_config;
  greedy_config.iterations = o.iterations;

  timer.note("enumerating all assignments (cap " + std::to_string(o.cap) + ")");
  const OracleResult oracle_best =
      brute_force_bounds(set, gt, eval_config, Direction::kMaximize, o.cap);
  const OracleResult oracle_worst =
      brute_force_bounds(set, gt, eval_config, Direction::kMinimize, o.cap);
  const GreedyRunResult greedy_best =
      greedy_bounds(set, gt, eval_config, greedy_config, Direction::kMaximize, o.common.threads);
  const GreedyRunResult greedy_worst =
      greedy_bounds(set, gt, eval_config, greedy_config, Direction::kMinimize, o.common.threads);

  ordered_json report = report_envelope("oracle");
  ordered_json cfg;
  cfg["gt"] = o.gt_path;
  cfg["preds"] = o.preds_path;
  cfg["max_shift"] = o.max_shift;
  cfg["iterations"] = o.iterations;
  cfg["cap"] = o.cap;
  report["config"] = std::move(cfg);
  ordered_json payload;
  payload["greedy_best"] = to_json(greedy_best.ap);
  payload["greedy_worst"] = to_json(greedy_worst.ap);
  payload["oracle_best"] = to_json(oracle_best.ap);
  payload["oracle_worst"] = to_json(oracle_worst.ap);
  payload["assignments_enumerated"] = oracle_best.assignments_enumerated;
  payload["gap_best_ap50"] = oracle_best.ap.ap50 - greedy_best.ap.ap50;
  payload["gap_worst_ap50"] = greedy_worst.ap.ap50 - oracle_worst.ap.ap50;
  payload["greedy_assignment_best"] = to_json(greedy_best.assignment);
  payload["oracle_assignment_best"] = to_json(oracle_best.assignment);
  payload["greedy_assignment_worst"] = to_json(greedy_worst.assignment);
  payload["oracle_assignment_worst"] = to_json(oracle_worst.assignment);
  report["oracle"] = std::move(payload);
  emit_report(report, o.common);
  return 0;
}

// ---- tta ----------------------------------------------------------------

struct TtaOptions {
  CommonOptions common;
  std::string gt_path;
  std::string preds_path;
  int max_shift = 1;
  double nms_iou = 0.5;
  bool class_agnostic = false;
  bool no_best = false;
  std::string label = "detector";
  std::string csv_path;
  std::string save_preds;
};

int run_tta(const TtaOptions& o) {
  StderrTimer timer(o.common.quiet);
  const GroundTruth gt = load_ground_truth(o.gt_path);
  const ShiftGrid grid(o.max_shift);
  const ShiftedPredictionSet set =
      load_predictions(o.preds_path, grid, PredictionFrame::kShifted, gt);

  NmsConfig nms_config;
  nms_config.iou_threshold = o.nms_iou;
  nms_config.class_aware = !o.class_agnostic;

  const EvalConfig eval_config;
  const ApResult baseline = compute_ap(zero_assignment(gt), set, gt, eval_config);

  timer.note("aggregating predictions over " + std::to_string(grid.size()) + " shifts");
  const auto aggregated = tta_aggregate(set, nms_config, o.common.threads);
  const ShiftedPredictionSet tta_set = tta_as_prediction_set(aggregated, set.image_ids());
  const ApResult tta_result = compute_ap(zero_assignment(gt), tta_set, gt, eval_config);
  if (!o.save_preds.empty()) {
    write_predictions_single(tta_set, o.save_preds, PredictionFrame::kCanonical);
  }

  std::optional<ApResult> best;
  if (!o.no_best && o.max_shift > 0) {
    timer.note("running greedy best-direction search");
    const GreedyConfig greedy_config;
    best = greedy_bounds(set, gt, eval_config, greedy_config, Direction::kMaximize,
                         o.common.threads)
               .ap;
  }

  ordered_json report = report_envelope("tta");
  ordered_json cfg;
  cfg["gt"] = o.gt_path;
  cfg["preds"] = o.preds_path;
  cfg["max_shift"] = o.max_shift;
  cfg["nms_iou"] = o.nms_iou;
  cfg["class_aware"] = nms_config.class_aware;
  cfg["label"] = o.label;
  report["config"] = std::move(cfg);
  ordered_json payload;
  payload["baseline"] = to_json(baseline);
  payload["tta"] = to_json(tta_result);
  if (best) payload["best"] = to_json(*best);
  report["tta"] = std::move(payload);

  if (!o.csv_path.empty()) {
    write_lines(o.csv_path, {table5_csv_header(),
                             table5_csv_row(o.label, baseline, tta_result,
                                            best ? &*best : nullptr)});
  }
  emit_report(report, o.common);
  return 0;
}

// ---- sweep --------------------------------------------------------------

struct SweepOptions {
  CommonOptions common;
  std::string gt_path;
  std::vector<std::string> preds_specs;  // "M:DIR"
  std::string shifts_text = "0,1";
  int iterations = 1;
  std::string csv_path;
  std::string diff_csv_path;
};

int run_sweep(const SweepOptions& o) {
  StderrTimer timer(o.common.quiet);
  const GroundTruth gt = load_ground_truth(o.gt_path);

  std::vector<int> max_shifts;
  {
    std::stringstream ss(o.shifts_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) max_shifts.push_back(std::stoi(item));
    }
  }
  if (max_shifts.empty()) throw InputError("--shifts lists no values");

  std::map<int, std::string> dirs;
  for (const auto& spec : o.preds_specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw InputError("bad --preds '" + spec + "', expected M:DIR");
    }
    dirs[std::stoi(spec.substr(0, colon))] = spec.substr(colon + 1);
  }

  std::map<int, ShiftedPredictionSet> sets;
  std::map<int, const ShiftedPredictionSet*> set_ptrs;
  for (const int m : max_shifts) {
    const auto it = dirs.find(m);
    if (it == dirs.end()) throw InputError("no --preds entry for max shift " + std::to_string(m));
    timer.note("loading predictions for max shift " + std::to_string(m));
    sets.emplace(m, load_predictions(it->second, ShiftGrid(m), PredictionFrame::kShifted, gt));
    set_ptrs[m] = &sets.at(m);
  }

  const EvalConfig eval_config;
  GreedyConfig greedy_config;
  greedy_config.iterations = o.iterations;
  const std::vector<SweepRow> rows =
      sweep_shift_range(set_ptrs, gt, eval_config, greedy_config, max_shifts, o.common.threads);

  ordered_json report = report_envelope("sweep");
  ordered_json cfg;
  cfg["gt"] = o.gt_path;
  cfg["shifts"] = max_shifts;
  cfg["iterations"] = o.iterations;
  ordered_json preds = ordered_json::object();
  for (const auto& [m, dir] : dirs) preds[std::to_string(m)] = dir;
  cfg["preds"] = std::move(preds);
  report["config"] = std::move(cfg);

  ordered_json rows_json = ordered_json::array();
  std::vector<std::string> csv{table3_csv_header()};
  std::vector<std::string> diff_csv{sweep_diff_csv_header()};
  for (const auto& row : rows) {
    ordered_json rec;
    rec["max_shift"] = row.max_shift;
    rec["baseline"] = to_json(row.baseline);
    if (row.bounds) rec["bounds"] = to_json(*row.bounds);
    rows_json.push_back(std::move(rec));
    csv.push_back(table3_csv_row(row));
    diff_csv.push_back(sweep_diff_csv_row(row));
  }
  report["rows"] = std::move(rows_json);
  if (!o.csv_path.empty()) write_lines(o.csv_path, csv);
  if (!o.diff_csv_path.empty()) write_lines(o.diff_csv_path, diff_csv);
  emit_report(report, o.common);
  return 0;
}

// ---- simulate -----------------------------------------------------------

struct SimulateOptions {
  CommonOptions common;
  std::string out_dir;
  std::string config_path;
  SimConfig config;
  std::string drop_model = "constant";
};

int run_simulate(SimulateOptions o) {
  StderrTimer timer(o.common.quiet);
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw InputError("cannot open file: " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("parse error in " + o.config_path + ": " + e.what());
    }
    o.config = sim_config_from_json(j, o.config);
    o.drop_model = to_string(o.config.drop_model);
  }
  o.config.drop_model = drop_model_from_string(o.drop_model);
  try {
    o.config.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  timer.note("generating dataset into " + o.out_dir);
  const SimDataset dataset = generate_dataset(o.config, o.common.threads);
  write_simulated_dataset(dataset, o.out_dir);

  ordered_json report = report_envelope("simulate");
  report["config"] = to_json(o.config);
  report["summary"] = to_json(describe(o.config));
  ordered_json realized;
  realized["images"] = dataset.gt.images.size();
  realized["annotations"] = dataset.gt.annotations.size();
  realized["detections"] = dataset.predictions.total_detections();
  report["realized"] = std::move(realized);
  emit_report(report, o.common);
  return 0;
}

// ---- manifest -----------------------------------------------------------

struct ManifestOptions {
  CommonOptions common;
  std::string gt_path;
  int max_shift = 1;
};

int run_manifest(const ManifestOptions& o) {
  StderrTimer timer(o.common.quiet);
  const GroundTruth gt = load_ground_truth(o.gt_path);
  const ShiftManifest manifest = emit_shift_manifest(gt, ShiftGrid(o.max_shift));
  if (o.common.out.empty()) throw InputError("manifest: --out is required");
  write_manifest(manifest, o.common.out);

  ordered_json report = report_envelope("manifest");
  ordered_json cfg;
  cfg["gt"] = o.gt_path;
  cfg["max_shift"] = o.max_shift;
  cfg["out"] = o.common.out;
  report["config"] = std::move(cfg);
  report["entries"] = manifest.entries.size();
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-equivariance evaluation for object detectors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("shifteval ") + kVersion);

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "COCO-protocol AP of a prediction set");
  eval_cmd->add_option("--gt", eval_opts.gt_path, "Ground-truth COCO JSON")->required();
  eval_cmd->add_option("--preds", eval_opts.preds_path, "Detections file or per-shift directory")
      ->required();
  eval_cmd->add_option("--max-shift", eval_opts.max_shift, "Grid max shift M (default 0)");
  eval_cmd->add_option("--frame", eval_opts.frame, "Box frame of the input: shifted|canonical")
      ->check(CLI::IsMember({"shifted", "canonical"}));
  eval_cmd->add_option("--assignment", eval_opts.assignment_path,
                       "JSON per-image shift assignment");
  eval_cmd->add_option("--shift", eval_opts.shift_text, "Single shift dx,dy for all images");
  add_common(eval_cmd, &eval_opts.common);

  BoundsOptions bounds_opts;
  auto* bounds_cmd = app.add_subcommand("bounds", "Greedy best/worst AP over per-image shifts");
  bounds_cmd->add_option("--gt", bounds_opts.gt_path, "Ground-truth COCO JSON")->required();
  bounds_cmd->add_option("--preds", bounds_opts.preds_path, "Per-shift prediction directory")
      ->required();
  bounds_cmd->add_option("--max-shift", bounds_opts.max_shift, "Grid max shift M")->required();
  bounds_cmd->add_option("--iterations", bounds_opts.iterations, "Greedy sweeps K (default 1)");
  bounds_cmd->add_option("--direction", bounds_opts.direction, "both|max|min")
      ->check(CLI::IsMember({"both", "max", "min"}));
  bounds_cmd->add_option("--objective", bounds_opts.objective,
                         "Selection objective: ap50 (default) or map")
      ->check(CLI::IsMember({"ap50", "map"}));
  bounds_cmd->add_option("--label", bounds_opts.label, "Method label for the CSV row");
  bounds_cmd->add_option("--csv", bounds_opts.csv_path, "Write a summary CSV row");
  bounds_cmd->add_flag("--allow-missing", bounds_opts.allow_missing,
                       "Treat missing (image, shift) cells as empty");
  add_common(bounds_cmd, &bounds_opts.common);

  OracleOptions oracle_opts;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "Compare greedy bounds against brute-force enumeration");
  oracle_cmd->add_option("--gt", oracle_opts.gt_path, "Ground-truth COCO JSON")->required();
  oracle_cmd->add_option("--preds", oracle_opts.preds_path, "Per-shift prediction directory")
      ->required();
  oracle_cmd->add_option("--max-shift", oracle_opts.max_shift, "Grid max shift M")->required();
  oracle_cmd->add_option("--iterations", oracle_opts.iterations, "Greedy sweeps K");
  oracle_cmd->add_option("--cap", oracle_opts.cap, "Enumeration cap (default 1e6)");
  add_common(oracle_cmd, &oracle_opts.common);

  TtaOptions tta_opts;
  auto* tta_cmd = app.add_subcommand("tta", "Pool all shifts per image and aggregate with NMS");
  tta_cmd->add_option("--gt", tta_opts.gt_path, "Ground-truth COCO JSON")->required();
  tta_cmd->add_option("--preds", tta_opts.preds_path, "Per-shift prediction directory")
      ->required();
  tta_cmd->add_option("--max-shift", tta_opts.max_shift, "Grid max shift M")->required();
  tta_cmd->add_option("--nms-iou", tta_opts.nms_iou, "NMS IoU threshold (default 0.5)");
  tta_cmd->add_flag("--class-agnostic", tta_opts.class_agnostic,
                    "Suppress across categories (default: class-aware)");
  tta_cmd->add_flag("--no-best", tta_opts.no_best, "Skip the greedy best-direction columns");
  tta_cmd->add_option("--label", tta_opts.label, "Method label for the CSV row");
  tta_cmd->add_option("--csv", tta_opts.csv_path, "Write a summary CSV row");
  tta_cmd->add_option("--save-preds", tta_opts.save_preds,
                      "Write aggregated detections as COCO results JSON");
  add_common(tta_cmd, &tta_opts.common);

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Bounds across increasing maximum shifts");
  sweep_cmd->add_option("--gt", sweep_opts.gt_path, "Ground-truth COCO JSON")->required();
  sweep_cmd->add_option("--preds", sweep_opts.preds_specs,
                        "Per-shift prediction directory as M:DIR (repeatable)")
      ->required();
  sweep_cmd->add_option("--shifts", sweep_opts.shifts_text, "Comma-separated max shifts");
  sweep_cmd->add_option("--iterations", sweep_opts.iterations, "Greedy sweeps K");
  sweep_cmd->add_option("--csv", sweep_opts.csv_path, "Write the per-shift table CSV");
  sweep_cmd->add_option("--diff-csv", sweep_opts.diff_csv_path,
                        "Write best/worst differences vs baseline CSV");
  add_common(sweep_cmd, &sweep_opts.common);

  SimulateOptions sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic detector dataset");
  sim_cmd->add_option("--out-dir", sim_opts.out_dir, "Output directory")->required();
  sim_cmd->add_option("--config", sim_opts.config_path, "JSON config file (flags override)");
  sim_cmd->add_option("--images", sim_opts.config.n_images, "Number of images");
  sim_cmd->add_option("--size", sim_opts.config.image_size, "Square image size in pixels");
  sim_cmd->add_option("--categories", sim_opts.config.n_categories, "Number of categories");
  sim_cmd->add_option("--min-objects", sim_opts.config.min_objects, "Min objects per image");
  sim_cmd->add_option("--max-objects", sim_opts.config.max_objects, "Max objects per image");
  sim_cmd->add_option("--max-shift", sim_opts.config.max_shift, "Grid max shift M");
  sim_cmd->add_option("--score-base", sim_opts.config.score_base, "Base detection score");
  sim_cmd->add_option("--box-jitter", sim_opts.config.box_jitter_sigma,
                      "Gaussian corner jitter sigma, pixels");
  sim_cmd->add_option("--score-jitter", sim_opts.config.score_jitter_sigma,
                      "Gaussian score jitter sigma");
  sim_cmd->add_option("--drop-model", sim_opts.drop_model, "constant|parity|linear")
      ->check(CLI::IsMember({"constant", "parity", "linear"}));
  sim_cmd->add_option("--drop-rate", sim_opts.config.drop_rate, "Drop probability parameter p");
  sim_cmd->add_option("--fp-rate", sim_opts.config.fp_rate,
                      "Expected spurious detections per image per shift");
  sim_cmd->add_option("--seed", sim_opts.config.seed, "RNG seed");
  add_common(sim_cmd, &sim_opts.common);

  ManifestOptions manifest_opts;
  auto* manifest_cmd =
      app.add_subcommand("manifest", "Emit the shifted-image manifest for a harness");
  manifest_cmd->add_option("--gt", manifest_opts.gt_path, "Ground-truth COCO JSON")->required();
  manifest_cmd->add_option("--max-shift", manifest_opts.max_shift, "Grid max shift M")
      ->required();
  add_common(manifest_cmd, &manifest_opts.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(eval_cmd)) return run_eval(eval_opts);
    if (app.got_subcommand(bounds_cmd)) return run_bounds(bounds_opts);
    if (app.got_subcommand(oracle_cmd)) return run_oracle(oracle_opts);
    if (app.got_subcommand(tta_cmd)) return run_tta(tta_opts);
    if (app.got_subcommand(sweep_cmd)) return run_sweep(sweep_opts);
    if (app.got_subcommand(sim_cmd)) return run_simulate(sim_opts);
    if (app.got_subcommand(manifest_cmd)) return run_manifest(manifest_opts);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
