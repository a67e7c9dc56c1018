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

#include "shifteval/tta.hpp"

#include <algorithm>
#include <stdexcept>

#include "shifteval/parallel.hpp"

namespace shifteval {

void NmsConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw std::invalid_argument("NmsConfig: iou_threshold must be in (0, 1]");
  }
}

std::vector<Detection> nms(const std::vector<Detection>& detections, const NmsConfig& config) {
  config.validate();
  std::vector<const Detection*> ranked;
  ranked.reserve(detections.size());
  for (const auto& d : detections) ranked.push_back(&d);
  std::sort(ranked.begin(), ranked.end(), [](const Detection* a, const Detection* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->det_id < b->det_id;
  });

  std::vector<Detection> kept;
  for (const Detection* d : ranked) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (config.class_aware && k.category_id != d->category_id) continue;
      if (iou(k.box, d->box) > config.iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(*d);
  }
  return kept;
}

std::map<std::int64_t, std::vector<Detection>> tta_aggregate(const ShiftedPredictionSet& set,
                                                             const NmsConfig& config,
                                                             int threads) {
  config.validate();
  const auto& ids = set.image_ids();
  std::vector<std::vector<Detection>> per_image(ids.size());

  parallel_for(ids.size(), threads, [&](std::size_t i) {
    std::vector<Detection> pooled;
    for (int s = 0; s < set.grid().size(); ++s) {
      for (const Detection& d : set.cell_by_index(static_cast<int>(i), s)) {
        pooled.push_back(d);
      }
    }
    // Pool order (shift lex, then original det_id) becomes the new det_id
    // order, so exact duplicates resolve to the smallest shift's copy.
    for (std::size_t k = 0; k < pooled.size(); ++k) {
      pooled[k].det_id = static_cast<std::int64_t>(k);
    }
    per_image[i] = nms(pooled, config);
  });

  std::map<std::int64_t, std::vector<Detection>> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]] = std::move(per_image[i]);
  return out;
}

ShiftedPredictionSet tta_as_prediction_set(
    const std::map<std::int64_t, std::vector<Detection>>& aggregated,
    const std::vector<std::int64_t>& image_ids) {
  ShiftedPredictionSet set(ShiftGrid(0), image_ids);
  set.mark_shift_observed(Shift{0, 0});
  std::int64_t next_det_id = 0;
  for (const std::int64_t id : image_ids) {
    const auto it = aggregated.find(id);
    if (it == aggregated.end()) continue;
    auto& cell = set.cell(id, Shift{0, 0});
    for (const Detection& d : it->second) {
      Detection copy = d;
      copy.det_id = next_det_id++;
      cell.push_back(copy);
    }
  }
  return set;
}

}  // namespace shifteval
