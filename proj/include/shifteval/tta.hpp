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

#ifndef SHIFTEVAL_TTA_HPP_
#define SHIFTEVAL_TTA_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "shifteval/dataset.hpp"

namespace shifteval {

struct NmsConfig {
  double iou_threshold = 0.5;
  bool class_aware = true;  // suppression only within a category

  void validate() const;  // throws std::invalid_argument
};

/// Greedy non-maximum suppression. Detections are ranked by
/// (score desc, det_id asc); a detection survives iff no already-kept
/// detection (of the same category when class_aware) overlaps it with
/// IoU strictly above the threshold. Output preserves the ranking; boxes
/// and scores are never modified.
std::vector<Detection> nms(const std::vector<Detection>& detections, const NmsConfig& config);

/// Test-time aggregation over shifts: per image, pool the detections of
/// every shift (shifts in (dy, dx) order, original det_id order within a
/// shift), re-assign det_ids in pool order, then suppress with nms.
std::map<std::int64_t, std::vector<Detection>> tta_aggregate(const ShiftedPredictionSet& set,
                                                             const NmsConfig& config,
                                                             int threads = 1);

/// Packages aggregated detections as a trivial single-shift prediction set
/// so they feed directly back into AP evaluation.
ShiftedPredictionSet tta_as_prediction_set(
    const std::map<std::int64_t, std::vector<Detection>>& aggregated,
    const std::vector<std::int64_t>& image_ids);

}  // namespace shifteval

#endif  // SHIFTEVAL_TTA_HPP_
