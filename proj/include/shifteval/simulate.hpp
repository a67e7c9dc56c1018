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

#ifndef SHIFTEVAL_SIMULATE_HPP_
#define SHIFTEVAL_SIMULATE_HPP_

#include <cstdint>
#include <string>

#include "shifteval/dataset.hpp"

namespace shifteval {

/// How the synthetic detector's miss probability depends on the shift.
enum class DropModel {
  kConstant,  // p for every shift
  kParity,    // p when (dx + dy) is odd, 0 otherwise (planted optimum on even shifts)
  kLinear,    // p * (dx + dy) / (2M), increasing with shift magnitude
};

DropModel drop_model_from_string(const std::string& name);
std::string to_string(DropModel model);

/// Synthetic detector with controllable shift variance. All randomness is
/// drawn from counter-based streams keyed by (seed, image, shift, object),
/// so outputs are independent of generation order and thread count.
struct SimConfig {
  int n_images = 100;
  int image_size = 256;  // square images
  int n_categories = 3;
  int min_objects = 2;
  int max_objects = 8;
  int max_shift = 1;
  double score_base = 0.8;
  double box_jitter_sigma = 0.0;    // per-shift Gaussian corner perturbation, pixels
  double score_jitter_sigma = 0.0;  // per-shift Gaussian score perturbation
  DropModel drop_model = DropModel::kConstant;
  double drop_rate = 0.0;  // the p parameter of the drop model
  double fp_rate = 0.0;    // expected spurious detections per image per shift
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
  double drop_prob(Shift s) const;
};

struct SimDataset {
  GroundTruth gt;
  ShiftedPredictionSet predictions;  // canonical frame
  ShiftManifest manifest;
};

SimDataset generate_dataset(const SimConfig& config, int threads = 1);

/// Analytic expectations for sanity-checking a generated set.
struct SimSummary {
  double mean_drop_prob = 0.0;  // over the shift grid
  double expected_objects = 0.0;
  double sd_objects = 0.0;
  double expected_true_detections = 0.0;  // GT-derived detections over all cells
  double sd_true_detections = 0.0;
  double expected_false_positives = 0.0;
  double sd_false_positives = 0.0;
};

SimSummary describe(const SimConfig& config);

/// Writes gt.json, per-shift detection files (shifted frame) and
/// manifest.json, byte-identical for identical (config, seed).
void write_simulated_dataset(const SimDataset& dataset, const std::string& dir);

}  // namespace shifteval

#endif  // SHIFTEVAL_SIMULATE_HPP_
