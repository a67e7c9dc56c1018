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

#include "shifteval/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "shifteval/parallel.hpp"

namespace shifteval {

void GreedyConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("GreedyConfig: iterations must be >= 1");
}

namespace {

bool better(double candidate, double incumbent, Direction direction) {
  return direction == Direction::kMaximize ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

GreedyRunResult greedy_bounds(const ShiftedPredictionSet& set, const GroundTruth& gt,
                              const EvalConfig& eval_config, const GreedyConfig& greedy_config,
                              Direction direction, int threads) {
  greedy_config.validate();
  if (gt.images.empty()) throw InputError("greedy_bounds: empty image set");

  EvalCache cache(set, gt, eval_config, threads);
  const ShiftGrid& grid = cache.grid();
  const int n_shifts = grid.size();
  const auto& ids = cache.image_ids();

  GreedyRunResult result;
  std::vector<double> values(n_shifts);

  for (int k = 0; k < greedy_config.iterations; ++k) {
    ++result.iterations_run;
    bool changed = false;
    for (const std::int64_t image_id : ids) {
      parallel_for(n_shifts, threads, [&](std::size_t s) {
        values[s] = cache.swap_objective(image_id, grid.at(static_cast<int>(s)),
                                         greedy_config.objective);
      });
      result.eval_count += static_cast<std::uint64_t>(n_shifts);

      const int incumbent = grid.index_of(cache.current_shift(image_id));
      int chosen = 0;
      for (int s = 1; s < n_shifts; ++s) {
        if (better(values[s], values[chosen], direction)) chosen = s;
      }
      // Incumbent survives ties; a move needs a strict improvement over it.
      if (values[incumbent] == values[chosen]) continue;
      cache.commit_swap(image_id, grid.at(chosen));
      changed = true;
    }
    result.objective_trace.push_back(cache.current_objective(greedy_config.objective));
    if (!changed) break;
  }

  result.ap = cache.current_ap();
  result.assignment = cache.assignment();
  return result;
}

std::pair<double, double> delta_ap(const ApResult& best, const ApResult& worst) {
  return {best.ap - worst.ap, best.ap50 - worst.ap50};
}

BoundsResult compute_bounds(const ShiftedPredictionSet& set, const GroundTruth& gt,
                            const EvalConfig& eval_config, const GreedyConfig& greedy_config,
                            int threads) {
  BoundsResult result;
  result.baseline = compute_ap(zero_assignment(gt), set, gt, eval_config);

  const GreedyRunResult best =
      greedy_bounds(set, gt, eval_config, greedy_config, Direction::kMaximize, threads);
  const GreedyRunResult worst =
      greedy_bounds(set, gt, eval_config, greedy_config, Direction::kMinimize, threads);

  result.ap_best = best.ap;
  result.ap_worst = worst.ap;
  result.assignment_best = best.assignment;
  result.assignment_worst = worst.assignment;
  result.eval_count_best = best.eval_count;
  result.eval_count_worst = worst.eval_count;
  result.iterations_best = best.iterations_run;
  result.iterations_worst = worst.iterations_run;
  result.trace_best = best.objective_trace;
  result.trace_worst = worst.objective_trace;
  std::tie(result.delta_ap, result.delta_ap50) = delta_ap(best.ap, worst.ap);
  return result;
}

OracleResult brute_force_bounds(const ShiftedPredictionSet& set, const GroundTruth& gt,
                                const EvalConfig& eval_config, Direction direction,
                                std::uint64_t cap) {
  if (gt.images.empty()) throw InputError("brute_force_bounds: empty image set");
  EvalCache cache(set, gt, eval_config, 1);
  const std::size_t n_images = cache.image_ids().size();
  const std::uint64_t n_shifts = static_cast<std::uint64_t>(cache.grid().size());

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n_images; ++i) {
    if (total > cap / n_shifts) {
      throw CapacityError("instance too large: assignment count exceeds cap " +
                          std::to_string(cap));
    }
    total *= n_shifts;
  }

  // Odometer enumeration, last image fastest: lexicographic order over the
  // assignment vector, so the first optimum found is the smallest one.
  std::vector<int> indices(n_images, 0);
  std::vector<int> best_indices = indices;
  double best_value = cache.eval_assignment_objective(indices, Objective::kAp50);
  std::uint64_t enumerated = 1;

  while (true) {
    std::size_t pos = n_images;
    while (pos > 0) {
      --pos;
      if (++indices[pos] < static_cast<int>(n_shifts)) break;
      indices[pos] = 0;
      if (pos == 0) {
        OracleResult result;
        result.ap = cache.eval_assignment(best_indices);
        for (std::size_t i = 0; i < n_images; ++i) {
          result.assignment[cache.image_ids()[i]] = cache.grid().at(best_indices[i]);
        }
        result.assignments_enumerated = enumerated;
        return result;
      }
    }
    const double value = cache.eval_assignment_objective(indices, Objective::kAp50);
    ++enumerated;
    if (better(value, best_value, direction)) {
      best_value = value;
      best_indices = indices;
    }
  }
}

std::vector<SweepRow> sweep_shift_range(
    const std::map<int, const ShiftedPredictionSet*>& sets_by_max_shift, const GroundTruth& gt,
    const EvalConfig& eval_config, const GreedyConfig& greedy_config,
    const std::vector<int>& max_shifts, int threads) {
  std::vector<SweepRow> rows;
  for (const int m : max_shifts) {
    const auto it = sets_by_max_shift.find(m);
    if (it == sets_by_max_shift.end() || it->second == nullptr) {
      throw InputError("sweep: no prediction set for max shift " + std::to_string(m));
    }
    const ShiftedPredictionSet& set = *it->second;
    if (set.grid().max_shift() != m) {
      throw InputError("sweep: prediction set grid does not match max shift " +
                       std::to_string(m));
    }
    SweepRow row;
    row.max_shift = m;
    if (m == 0) {
      row.baseline = compute_ap(zero_assignment(gt), set, gt, eval_config);
    } else {
      BoundsResult bounds = compute_bounds(set, gt, eval_config, greedy_config, threads);
      row.baseline = bounds.baseline;
      row.bounds = std::move(bounds);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string pct(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

}  // namespace

Table1Row make_table1_row(const std::string& method, double ap, double worst_ap, double best_ap,
                          double ap50, double worst_ap50, double best_ap50) {
  Table1Row row;
  row.method = method;
  row.ap = ap;
  row.worst_ap = worst_ap;
  row.best_ap = best_ap;
  row.delta_ap = best_ap - worst_ap;
  row.ap50 = ap50;
  row.worst_ap50 = worst_ap50;
  row.best_ap50 = best_ap50;
  row.delta_ap50 = best_ap50 - worst_ap50;
  return row;
}

Table1Row make_table1_row(const std::string& method, const BoundsResult& bounds) {
  return make_table1_row(method, 100.0 * bounds.baseline.ap, 100.0 * bounds.ap_worst.ap,
                         100.0 * bounds.ap_best.ap, 100.0 * bounds.baseline.ap50,
                         100.0 * bounds.ap_worst.ap50, 100.0 * bounds.ap_best.ap50);
}

std::string table1_csv_header() {
  return "method,ap,worst_ap,best_ap,delta_ap,ap50,worst_ap50,best_ap50,delta_ap50";
}

std::string table1_csv_row(const Table1Row& r) {
  return r.method + "," + pct(r.ap) + "," + pct(r.worst_ap) + "," + pct(r.best_ap) + "," +
         pct(r.delta_ap) + "," + pct(r.ap50) + "," + pct(r.worst_ap50) + "," + pct(r.best_ap50) +
         "," + pct(r.delta_ap50);
}

std::string table3_csv_header() {
  return "max_shift,worst_ap,best_ap,delta_ap,worst_ap50,best_ap50,delta_ap50";
}

std::string table3_csv_row(const SweepRow& row) {
  if (!row.bounds) {
    // Only the baseline shift exists; no best/worst spread to report.
    return std::to_string(row.max_shift) + "," + pct(100.0 * row.baseline.ap) + "," +
           pct(100.0 * row.baseline.ap) + ",-," + pct(100.0 * row.baseline.ap50) + "," +
           pct(100.0 * row.baseline.ap50) + ",-";
  }
  const BoundsResult& b = *row.bounds;
  return std::to_string(row.max_shift) + "," + pct(100.0 * b.ap_worst.ap) + "," +
         pct(100.0 * b.ap_best.ap) + "," + pct(100.0 * b.delta_ap) + "," +
         pct(100.0 * b.ap_worst.ap50) + "," + pct(100.0 * b.ap_best.ap50) + "," +
         pct(100.0 * b.delta_ap50);
}

std::string sweep_diff_csv_header() {
  return "max_shift,worst_ap_diff,best_ap_diff,worst_ap50_diff,best_ap50_diff";
}

std::string sweep_diff_csv_row(const SweepRow& row) {
  if (!row.bounds) {
    return std::to_string(row.max_shift) + ",0.0,0.0,0.0,0.0";
  }
  const BoundsResult& b = *row.bounds;
  return std::to_string(row.max_shift) + "," +
         pct(100.0 * (b.ap_worst.ap - b.baseline.ap)) + "," +
         pct(100.0 * (b.ap_best.ap - b.baseline.ap)) + "," +
         pct(100.0 * (b.ap_worst.ap50 - b.baseline.ap50)) + "," +
         pct(100.0 * (b.ap_best.ap50 - b.baseline.ap50));
}

std::string table5_csv_header() {
  return "method,baseline_ap,baseline_ap50,tta_ap,tta_ap50,best_ap,best_ap50";
}

std::string table5_csv_row(const std::string& method, const ApResult& baseline,
                           const ApResult& tta, const ApResult* best) {
  std::string row = method + "," + pct(100.0 * baseline.ap) + "," + pct(100.0 * baseline.ap50) +
                    "," + pct(100.0 * tta.ap) + "," + pct(100.0 * tta.ap50);
  if (best != nullptr) {
    row += "," + pct(100.0 * best->ap) + "," + pct(100.0 * best->ap50);
  } else {
    row += ",-,-";
  }
  return row;
}

}  // namespace shifteval
