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

#ifndef SHIFTEVAL_BOUNDS_HPP_
#define SHIFTEVAL_BOUNDS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shifteval/evaluator.hpp"

namespace shifteval {

enum class Direction { kMaximize, kMinimize };

struct GreedyConfig {
  int iterations = 1;  // full sweeps over the image set
  Objective objective = Objective::kAp50;

  void validate() const;
};

/// Outcome of one greedy run (one direction).
struct GreedyRunResult {
  ApResult ap;                 // full result on the final assignment
  ShiftAssignment assignment;  // the selected shift per image
  std::uint64_t eval_count = 0;  // candidate evaluations performed
  int iterations_run = 0;
  std::vector<double> objective_trace;  // working objective after each sweep
};

/// Coordinate-wise greedy search for the per-image shift assignment that
/// maximizes (or minimizes) the dataset objective. All shifts start at
/// (0,0); images are visited in ascending id order; every in-grid shift is
/// evaluated against the fixed rest; ties keep the incumbent shift and
/// otherwise resolve to the smallest (dy, dx). Sweeps stop early only when
/// a full sweep changes nothing.
GreedyRunResult greedy_bounds(const ShiftedPredictionSet& set, const GroundTruth& gt,
                              const EvalConfig& eval_config, const GreedyConfig& greedy_config,
                              Direction direction, int threads = 1);

/// Both directions plus the un-shifted baseline.
struct BoundsResult {
  ApResult baseline;  // all-(0,0) assignment
  ApResult ap_best;
  ApResult ap_worst;
  ShiftAssignment assignment_best;
  ShiftAssignment assignment_worst;
  double delta_ap = 0.0;
  double delta_ap50 = 0.0;
  std::uint64_t eval_count_best = 0;
  std::uint64_t eval_count_worst = 0;
  int iterations_best = 0;
  int iterations_worst = 0;
  std::vector<double> trace_best;
  std::vector<double> trace_worst;
};

BoundsResult compute_bounds(const ShiftedPredictionSet& set, const GroundTruth& gt,
                            const EvalConfig& eval_config, const GreedyConfig& greedy_config,
                            int threads = 1);

/// (best - worst) componentwise for (ap, ap50).
std::pair<double, double> delta_ap(const ApResult& best, const ApResult& worst);

struct OracleResult {
  ApResult ap;
  ShiftAssignment assignment;
  std::uint64_t assignments_enumerated = 0;
};

/// Exact optimum of the ap50 objective over all ((M+1)^2)^N assignments.
/// Enumerates assignment vectors in lexicographic order (images ascending,
/// shifts in (dy, dx) order) and keeps the first optimum, so ties resolve
/// to the lexicographically smallest vector. Throws CapacityError when the
/// assignment count exceeds `cap`.
OracleResult brute_force_bounds(const ShiftedPredictionSet& set, const GroundTruth& gt,
                                const EvalConfig& eval_config, Direction direction,
                                std::uint64_t cap = 1000000);

struct SweepRow {
  int max_shift = 0;
  ApResult baseline;
  std::optional<BoundsResult> bounds;  // empty for M = 0 (only the baseline shift exists)
};

/// Bounds for a series of nested grids, one prediction set per max shift.
std::vector<SweepRow> sweep_shift_range(
    const std::map<int, const ShiftedPredictionSet*>& sets_by_max_shift, const GroundTruth& gt,
    const EvalConfig& eval_config, const GreedyConfig& greedy_config,
    const std::vector<int>& max_shifts, int threads = 1);

// ---- Report tables ----------------------------------------------------
// CSV layouts mirror the common reporting convention for this metric:
// AP values scaled to percentages with one decimal.

struct Table1Row {
  std::string method;
  double ap = 0.0;
  double worst_ap = 0.0;
  double best_ap = 0.0;
  double delta_ap = 0.0;
  double ap50 = 0.0;
  double worst_ap50 = 0.0;
  double best_ap50 = 0.0;
  double delta_ap50 = 0.0;
};

/// Builds a row from percentage-scale inputs; deltas are computed here.
Table1Row make_table1_row(const std::string& method, double ap, double worst_ap, double best_ap,
                          double ap50, double worst_ap50, double best_ap50);

/// Converts a bounds run (fractional APs) into a percentage-scale row.
/// The baseline AP fills the `ap` column.
Table1Row make_table1_row(const std::string& method, const BoundsResult& bounds);

std::string table1_csv_header();
std::string table1_csv_row(const Table1Row& row);

std::string table3_csv_header();
std::string table3_csv_row(const SweepRow& row);

/// Fig.-4-style series: best/worst differences against the baseline.
std::string sweep_diff_csv_header();
std::string sweep_diff_csv_row(const SweepRow& row);

std::string table5_csv_header();
std::string table5_csv_row(const std::string& method, const ApResult& baseline,
                           const ApResult& tta, const ApResult* best);

}  // namespace shifteval

#endif  // SHIFTEVAL_BOUNDS_HPP_
