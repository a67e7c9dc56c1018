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

#ifndef SHIFTEVAL_EVALUATOR_HPP_
#define SHIFTEVAL_EVALUATOR_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "shifteval/dataset.hpp"
#include "shifteval/geometry.hpp"

namespace shifteval {

/// numpy-compatible linspace: i * (stop - start) / (n - 1) + start.
std::vector<double> linspace(double start, double stop, int n);

std::vector<double> default_iou_thresholds();  // 0.50:0.05:0.95, 10 values

/// COCO-protocol evaluation parameters. The defaults reproduce the canonical
/// protocol's "all"-area, maxDets=100 slice, which is the only slice this
/// engine computes.
struct EvalConfig {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  int recall_points = 101;
  /// Top-scoring detections kept per image and category before matching,
  /// as in the canonical protocol.
  int max_dets = 100;
  double area_min = 0.0;
  double area_max = std::numeric_limits<double>::infinity();

  void validate() const;  // throws std::invalid_argument
  int threshold_index(double t) const;  // exact lookup, -1 if absent
  int ap50_index() const { return threshold_index(0.5); }
};

/// Per-category match outcome for one image (one prediction cell).
/// Detection entries are ordered by (score desc, det_id asc) and truncated
/// to max_dets. Bit t of the masks refers to iou_thresholds[t].
struct CategoryMatch {
  int category_id = 0;
  int gt_count = 0;  // non-ignored ground truth of this category
  std::vector<double> scores;
  std::vector<std::int64_t> det_ids;
  std::vector<std::uint32_t> tp_bits;      // matched a counted GT
  std::vector<std::uint32_t> ignore_bits;  // neither TP nor FP
  std::vector<std::vector<std::int64_t>> matched_gt;  // [threshold][det] -> ann id or -1
};

struct ImageMatchResult {
  std::vector<CategoryMatch> categories;  // ascending category_id
  const CategoryMatch* find(int category_id) const;
};

/// Greedy COCO matching for a single image. Detections must be in the
/// canonical frame. Ground truths flagged ignore behave as crowd regions:
/// they can absorb any number of detections (overlap measured as
/// intersection over detection area) and matched detections count as
/// neither TP nor FP.
ImageMatchResult match_image(const std::vector<Detection>& detections,
                             const std::vector<GroundTruthAnnotation>& ground_truths,
                             const EvalConfig& config);

struct CategoryAp {
  int category_id = 0;
  double ap = -1.0;    // -1 sentinel: category has no ground truth
  double ap50 = -1.0;
};

struct ThresholdAp {
  double iou_threshold = 0.0;
  double ap = -1.0;
};

struct ApResult {
  double ap = -1.0;
  double ap50 = -1.0;
  std::vector<CategoryAp> per_category;    // every declared category
  std::vector<ThresholdAp> per_threshold;  // mean over categories with GT
};

/// Exact (bit-level) equality of all fields; used to verify that the
/// incremental evaluation path reproduces the direct one.
bool bit_equal(const ApResult& a, const ApResult& b);

/// One chosen shift per image; must be complete over the image set.
using ShiftAssignment = std::map<std::int64_t, Shift>;

ShiftAssignment zero_assignment(const GroundTruth& gt);

/// Direct (non-incremental) dataset AP under a per-image shift selection:
/// match every image's selected cell, sort all detections per category by
/// (score desc, image_id asc, det_id asc), accumulate precision/recall,
/// sample at the recall points.
ApResult compute_ap(const ShiftAssignment& selection, const ShiftedPredictionSet& set,
                    const GroundTruth& gt, const EvalConfig& config);

enum class Objective { kAp50, kMeanAp };

double objective_of(const ApResult& r, Objective objective);

namespace detail {

/// One detection inside a per-category dataset-wide score stream.
struct StreamEntry {
  double score;
  std::int64_t det_id;
  std::uint32_t image_index;
  std::uint32_t tp_bits;
  std::uint32_t ignore_bits;
};

/// Total order (score desc, image asc, det_id asc); (image, det_id) is
/// unique, so sorted streams are identical however they are produced.
inline bool stream_less(const StreamEntry& a, const StreamEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.image_index != b.image_index) return a.image_index < b.image_index;
  return a.det_id < b.det_id;
}

}  // namespace detail

/// Precomputed per-(image, shift) match results plus the merged score
/// streams of a current assignment. Match results depend only on
/// (GT, predictions, config), so single-image shift swaps re-merge score
/// order but never re-run IoU matching.
///
/// Thread model: construction may parallelize internally; a built cache
/// supports concurrent read-only swap queries; commit_swap requires
/// exclusive access.
class EvalCache {
 public:
  EvalCache(const ShiftedPredictionSet& set, const GroundTruth& gt, EvalConfig config,
            int threads = 1);

  const std::vector<std::int64_t>& image_ids() const { return image_ids_; }
  const ShiftGrid& grid() const { return grid_; }
  const EvalConfig& config() const { return config_; }

  ShiftAssignment assignment() const;
  Shift current_shift(std::int64_t image_id) const;
  void reset_assignment();  // all shifts back to (0,0)
  void set_assignment(const ShiftAssignment& assignment);

  /// Full result for the current assignment.
  ApResult current_ap() const;
  double current_objective(Objective objective) const;

  /// Result with image_id's shift replaced by `candidate`, all other images
  /// fixed. Pure query: bit-identical to compute_ap on the swapped
  /// assignment; does not mutate the cache.
  ApResult swap_and_eval(std::int64_t image_id, Shift candidate) const;

  /// Single-number fast path of swap_and_eval for the greedy inner loop.
  double swap_objective(std::int64_t image_id, Shift candidate, Objective objective) const;

  /// Makes `new_shift` the current assignment for image_id and refreshes
  /// the merged streams.
  void commit_swap(std::int64_t image_id, Shift new_shift);

  /// Stateless evaluation of an arbitrary assignment given as per-image
  /// shift indices (image order = image_ids()). Used by the brute-force
  /// oracle.
  ApResult eval_assignment(const std::vector<int>& shift_index_per_image) const;
  double eval_assignment_objective(const std::vector<int>& shift_index_per_image,
                                   Objective objective) const;

  EvalCache(const EvalCache&) = delete;
  EvalCache& operator=(const EvalCache&) = delete;

 private:
  struct CellEntry {
    double score;
    std::int64_t det_id;
    std::uint32_t tp_bits;
    std::uint32_t ignore_bits;
  };

  const std::vector<CellEntry>& cell_entries(int image_index, int shift_index,
                                             int category_index) const;
  void rebuild_merged();
  void merged_with_swap(int image_index, int shift_index, int category_index,
                        std::vector<detail::StreamEntry>* out) const;
  int image_index_of(std::int64_t image_id) const;

  ShiftGrid grid_;
  EvalConfig config_;
  std::vector<std::int64_t> image_ids_;
  std::vector<int> category_ids_;
  std::vector<long> gt_counts_;  // non-ignored GT per category
  // cells_[(image * n_shifts + shift) * n_categories + category]
  std::vector<std::vector<CellEntry>> cells_;
  std::vector<int> current_shift_;                       // per image
  std::vector<std::vector<detail::StreamEntry>> merged_;  // per category
};

}  // namespace shifteval

#endif  // SHIFTEVAL_EVALUATOR_HPP_
