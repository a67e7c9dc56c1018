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

#include "shifteval/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "shifteval/parallel.hpp"
#include "shifteval/rng.hpp"

namespace shifteval {

namespace {

// Stream domains; together with (image, shift, object) they address one
// independent substream per random decision.
enum StreamPurpose : std::uint32_t {
  kLayout = 1,   // per-image object count, categories, boxes
  kDrop = 2,     // per-(image, shift, object) keep/miss decision
  kBox = 3,      // per-(image, shift, object) corner jitter
  kScore = 4,    // per-(image, shift, object) score jitter
  kSpurious = 5  // per-(image, shift) false-positive stream
};

Philox4x32 make_stream(const SimConfig& cfg, std::int64_t image_id, Shift shift,
                       StreamPurpose purpose, std::uint32_t object_index) {
  const std::uint32_t shift_code =
      (static_cast<std::uint32_t>(shift.dy) << 20) | (static_cast<std::uint32_t>(shift.dx) << 8) |
      static_cast<std::uint32_t>(purpose);
  return Philox4x32(cfg.seed, object_index, shift_code, static_cast<std::uint32_t>(image_id));
}

// Coordinates are snapped to 1/256 px so that applying and un-applying an
// integer shift, and writing/re-reading JSON, reproduce the exact bits.
double quantize(double v) { return std::round(v * 256.0) / 256.0; }

Box quantize(const Box& b) {
  Box out{quantize(b.x), quantize(b.y), quantize(b.w), quantize(b.h)};
  out.w = std::max(out.w, 1.0 / 256.0);
  out.h = std::max(out.h, 1.0 / 256.0);
  return out;
}

}  // namespace

DropModel drop_model_from_string(const std::string& name) {
  if (name == "constant") return DropModel::kConstant;
  if (name == "parity") return DropModel::kParity;
  if (name == "linear") return DropModel::kLinear;
  throw std::invalid_argument("unknown drop model: " + name);
}

std::string to_string(DropModel model) {
  switch (model) {
    case DropModel::kConstant: return "constant";
    case DropModel::kParity: return "parity";
    case DropModel::kLinear: return "linear";
  }
  return "constant";
}

void SimConfig::validate() const {
  if (n_images < 1) throw std::invalid_argument("SimConfig: n_images must be >= 1");
  if (image_size < 8) throw std::invalid_argument("SimConfig: image_size must be >= 8");
  if (n_categories < 1) throw std::invalid_argument("SimConfig: n_categories must be >= 1");
  if (min_objects < 0 || max_objects < min_objects) {
    throw std::invalid_argument("SimConfig: invalid objects_per_image range");
  }
  if (max_shift < 0) throw std::invalid_argument("SimConfig: max_shift must be >= 0");
  if (!(score_base >= 0.0 && score_base <= 1.0)) {
    throw std::invalid_argument("SimConfig: score_base must be in [0, 1]");
  }
  if (box_jitter_sigma < 0.0 || score_jitter_sigma < 0.0) {
    throw std::invalid_argument("SimConfig: sigmas must be >= 0");
  }
  if (!(drop_rate >= 0.0 && drop_rate <= 1.0)) {
    throw std::invalid_argument("SimConfig: drop_rate must be in [0, 1]");
  }
  if (fp_rate < 0.0) throw std::invalid_argument("SimConfig: fp_rate must be >= 0");
}

double SimConfig::drop_prob(Shift s) const {
  switch (drop_model) {
    case DropModel::kConstant:
      return drop_rate;
    case DropModel::kParity:
      return ((s.dx + s.dy) % 2 != 0) ? drop_rate : 0.0;
    case DropModel::kLinear:
      if (max_shift == 0) return 0.0;
      return drop_rate * static_cast<double>(s.dx + s.dy) / (2.0 * max_shift);
  }
  return 0.0;
}

SimDataset generate_dataset(const SimConfig& config, int threads) {
  config.validate();
  const ShiftGrid grid(config.max_shift);
  const double size = static_cast<double>(config.image_size);

  SimDataset out;
  for (int i = 0; i < config.n_images; ++i) {
    out.gt.images.push_back(ImageRecord{i + 1, size, size});
  }
  for (int c = 0; c < config.n_categories; ++c) {
    out.gt.categories.push_back(Category{c + 1, "sim_" + std::to_string(c + 1)});
  }

  // Ground truth is drawn once per image, independent of shifts.
  struct SimObject {
    Box box;
    int category_id;
  };
  std::vector<std::vector<SimObject>> objects(config.n_images);
  parallel_for(config.n_images, threads, [&](std::size_t i) {
    const std::int64_t image_id = static_cast<std::int64_t>(i) + 1;
    Philox4x32 layout = make_stream(config, image_id, Shift{0, 0}, kLayout, 0);
    const int count = layout.next_int(config.min_objects, config.max_objects);
    for (int k = 0; k < count; ++k) {
      Philox4x32 obj = make_stream(config, image_id, Shift{0, 0}, kLayout,
                                   static_cast<std::uint32_t>(k) + 1);
      Box box;
      box.w = (0.08 + 0.17 * obj.next_unit()) * size;
      box.h = (0.08 + 0.17 * obj.next_unit()) * size;
      box.x = obj.next_unit() * (size - box.w);
      box.y = obj.next_unit() * (size - box.h);
      const int category_id = obj.next_int(1, config.n_categories);
      objects[i].push_back(SimObject{quantize(box), category_id});
    }
  });

  std::int64_t ann_id = 1;
  for (int i = 0; i < config.n_images; ++i) {
    for (const auto& obj : objects[i]) {
      out.gt.annotations.push_back(
          GroundTruthAnnotation{ann_id++, i + 1, obj.category_id, obj.box, false});
    }
  }
  out.gt.finalize();

  out.predictions = ShiftedPredictionSet(grid, out.gt.image_ids());
  for (int s = 0; s < grid.size(); ++s) out.predictions.mark_shift_observed(grid.at(s));

  // Detections cell by cell; each cell's randomness comes from its own
  // streams, so the fill order is irrelevant.
  const std::size_t n_cells = static_cast<std::size_t>(config.n_images) * grid.size();
  std::vector<std::vector<Detection>> cells(n_cells);
  parallel_for(n_cells, threads, [&](std::size_t cell_idx) {
    const int i = static_cast<int>(cell_idx / grid.size());
    const Shift shift = grid.at(static_cast<int>(cell_idx % grid.size()));
    const std::int64_t image_id = i + 1;
    const double p_drop = config.drop_prob(shift);
    auto& cell = cells[cell_idx];

    for (std::size_t k = 0; k < objects[i].size(); ++k) {
      const SimObject& obj = objects[i][k];
      const auto obj_idx = static_cast<std::uint32_t>(k) + 1;
      Philox4x32 drop = make_stream(config, image_id, shift, kDrop, obj_idx);
      if (drop.next_unit() < p_drop) continue;

      Box box = obj.box;
      if (config.box_jitter_sigma > 0.0) {
        Philox4x32 jitter = make_stream(config, image_id, shift, kBox, obj_idx);
        const double x1 = box.x + jitter.next_normal() * config.box_jitter_sigma;
        const double y1 = box.y + jitter.next_normal() * config.box_jitter_sigma;
        const double x2 = box.x + box.w + jitter.next_normal() * config.box_jitter_sigma;
        const double y2 = box.y + box.h + jitter.next_normal() * config.box_jitter_sigma;
        box = quantize(Box{x1, y1, x2 - x1, y2 - y1});
      }

      double score = config.score_base;
      if (config.score_jitter_sigma > 0.0) {
        Philox4x32 sj = make_stream(config, image_id, shift, kScore, obj_idx);
        score = std::clamp(score + sj.next_normal() * config.score_jitter_sigma, 0.0, 1.0);
      }

      Detection det;
      det.image_id = image_id;
      det.category_id = obj.category_id;
      det.box = box;
      det.score = score;
      cell.push_back(det);
    }

    if (config.fp_rate > 0.0) {
      Philox4x32 fp = make_stream(config, image_id, shift, kSpurious, 0);
      const int n_fp = fp.next_poisson(config.fp_rate);
      for (int f = 0; f < n_fp; ++f) {
        // Spurious boxes stay below IoU 0.3 against every object so they
        // are unambiguous false positives at all thresholds.
        for (int attempt = 0; attempt < 64; ++attempt) {
          Box box;
          box.w = (0.05 + 0.10 * fp.next_unit()) * size;
          box.h = (0.05 + 0.10 * fp.next_unit()) * size;
          box.x = fp.next_unit() * (size - box.w);
          box.y = fp.next_unit() * (size - box.h);
          box = quantize(box);
          bool clear = true;
          for (const auto& obj : objects[i]) {
            if (iou(box, obj.box) >= 0.3) {
              clear = false;
              break;
            }
          }
          if (!clear) continue;
          Detection det;
          det.image_id = image_id;
          det.category_id = fp.next_int(1, config.n_categories);
          det.box = box;
          det.score = fp.next_unit();
          cell.push_back(det);
          break;
        }
      }
    }
  });

  // det_id assignment mirrors the per-shift-file loader: shift-major, then
  // image order, then record order, so a file round trip is an identity.
  std::int64_t next_det_id = 0;
  for (int s = 0; s < grid.size(); ++s) {
    for (int i = 0; i < config.n_images; ++i) {
      auto& cell = out.predictions.cell(i + 1, grid.at(s));
      cell = cells[static_cast<std::size_t>(i) * grid.size() + s];
      for (auto& det : cell) det.det_id = next_det_id++;
    }
  }

  out.manifest = emit_shift_manifest(out.gt, grid);
  return out;
}

SimSummary describe(const SimConfig& config) {
  config.validate();
  const ShiftGrid grid(config.max_shift);

  SimSummary s;
  const double n_images = config.n_images;
  const double span = config.max_objects - config.min_objects + 1;
  const double mean_objects = 0.5 * (config.min_objects + config.max_objects);
  const double var_objects = (span * span - 1.0) / 12.0;

  s.expected_objects = n_images * mean_objects;
  s.sd_objects = std::sqrt(n_images * var_objects);

  double keep_sum = 0.0;       // sum over shifts of (1 - p)
  double keep_var_sum = 0.0;   // sum over shifts of p (1 - p)
  double drop_sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double p = config.drop_prob(grid.at(i));
    drop_sum += p;
    keep_sum += 1.0 - p;
    keep_var_sum += p * (1.0 - p);
  }
  s.mean_drop_prob = drop_sum / grid.size();

  // Per image: T_i = sum over objects and shifts of an independent keep
  // event; object count itself is uniform.
  s.expected_true_detections = n_images * mean_objects * keep_sum;
  s.sd_true_detections =
      std::sqrt(n_images * (mean_objects * keep_var_sum + var_objects * keep_sum * keep_sum));

  const double cells = n_images * grid.size();
  s.expected_false_positives = cells * config.fp_rate;
  s.sd_false_positives = std::sqrt(cells * config.fp_rate);
  return s;
}

void write_simulated_dataset(const SimDataset& dataset, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_ground_truth(dataset.gt, (fs::path(dir) / "gt.json").string());
  write_predictions(dataset.predictions, dir, PredictionFrame::kShifted);
  write_manifest(dataset.manifest, (fs::path(dir) / "manifest.json").string());
}

}  // namespace shifteval
