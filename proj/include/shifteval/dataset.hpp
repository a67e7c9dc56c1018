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

#ifndef SHIFTEVAL_DATASET_HPP_
#define SHIFTEVAL_DATASET_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "shifteval/geometry.hpp"

namespace shifteval {

/// Malformed or inconsistent input files. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance too large for an exhaustive computation. CLI exit code 3.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImageRecord {
  std::int64_t id = 0;
  double width = 0.0;
  double height = 0.0;
};

struct Category {
  int id = 0;
  std::string name;
};

struct GroundTruthAnnotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  int category_id = 0;
  Box box;
  bool ignore = false;  // crowd/ignore region: matched detections count as neither TP nor FP
};

/// Ground-truth tables. Images and categories are kept sorted by id;
/// annotations keep file order (their order is a matching tie-break).
struct GroundTruth {
  std::vector<ImageRecord> images;
  std::vector<Category> categories;
  std::vector<GroundTruthAnnotation> annotations;

  /// Sorts images/categories, validates invariants, builds the per-image
  /// annotation index. Must be called after manual construction.
  void finalize();

  bool has_category(int category_id) const;
  const ImageRecord* find_image(std::int64_t image_id) const;
  /// Annotation indices for one image, in file order. Empty for unknown ids.
  const std::vector<std::size_t>& annotations_of(std::int64_t image_id) const;
  std::vector<std::int64_t> image_ids() const;

 private:
  std::map<std::int64_t, std::vector<std::size_t>> by_image_;
  std::vector<std::size_t> empty_;
};

struct Detection {
  std::int64_t image_id = 0;
  int category_id = 0;
  Box box;  // frame declared by the containing set (canonical inside ShiftedPredictionSet)
  double score = 0.0;
  std::int64_t det_id = 0;  // load ordinal; stable tie-break key
};

enum class PredictionFrame { kShifted, kCanonical };

/// Detections for every (image, shift) cell of a grid, stored in the
/// canonical (un-shifted) frame. Cells with no detections are empty lists.
class ShiftedPredictionSet {
 public:
  ShiftedPredictionSet() = default;
  ShiftedPredictionSet(ShiftGrid grid, std::vector<std::int64_t> image_ids);

  const ShiftGrid& grid() const { return grid_; }
  const std::vector<std::int64_t>& image_ids() const { return image_ids_; }
  int image_index(std::int64_t image_id) const;  // throws InputError if unknown

  const std::vector<Detection>& detections(std::int64_t image_id, Shift s) const;
  std::vector<Detection>& cell(std::int64_t image_id, Shift s);
  const std::vector<Detection>& cell_by_index(int image_index, int shift_index) const {
    return cells_[static_cast<std::size_t>(image_index) * grid_.size() + shift_index];
  }

  std::size_t total_detections() const;

  /// Shifts for which at least one source file or record existed.
  void mark_shift_observed(Shift s);
  bool shift_observed(Shift s) const;
  std::vector<Shift> missing_shifts() const;

  /// Copy with the grid shrunk to new_max_shift; cells and det_ids kept.
  ShiftedPredictionSet restricted(int new_max_shift) const;

 private:
  ShiftGrid grid_;
  std::vector<std::int64_t> image_ids_;  // ascending
  std::map<std::int64_t, int> index_;
  std::vector<std::vector<Detection>> cells_;  // [image_index * grid.size() + shift_index]
  std::vector<bool> shift_observed_;
};

GroundTruth load_ground_truth(const std::string& path);

/// Writes the COCO ground-truth subset (images/annotations/categories);
/// annotations carry area = w*h and the iscrowd flag.
void write_ground_truth(const GroundTruth& gt, const std::string& path);

/// Loads COCO detection-results JSON into a complete per-(image, shift) set.
/// `path` is either a directory of per-shift files named shift_<dx>_<dy>.json
/// or a single file whose records carry a "shift": [dx, dy] field (optional
/// only when the grid is the trivial M=0 grid). Boxes read in the shifted
/// frame are converted to the canonical frame on ingest.
ShiftedPredictionSet load_predictions(const std::string& path, const ShiftGrid& grid,
                                      PredictionFrame frame, const GroundTruth& gt);

/// Writes one COCO detection-results file per shift (shift_<dx>_<dy>.json).
void write_predictions(const ShiftedPredictionSet& set, const std::string& dir,
                       PredictionFrame frame);

/// Writes a single detection-results array. Records carry a shift field
/// unless the set's grid is trivial.
void write_predictions_single(const ShiftedPredictionSet& set, const std::string& path,
                              PredictionFrame frame);

struct ShiftManifestEntry {
  std::int64_t image_id = 0;
  std::string shifted_name;
  Shift shift;
  double canvas_w = 0.0;
  double canvas_h = 0.0;
};

/// Instructions for an external harness that embeds each image into an
/// enlarged black canvas once per shift.
struct ShiftManifest {
  int max_shift = 0;
  std::string canvas_policy = "minimal";
  std::vector<ShiftManifestEntry> entries;
};

/// Minimal padding policy: per-image canvas of (width+M, height+M); the
/// embed offset of entry delta equals delta itself.
ShiftManifest emit_shift_manifest(const GroundTruth& gt, const ShiftGrid& grid);

void write_manifest(const ShiftManifest& manifest, const std::string& path);
ShiftManifest load_manifest(const std::string& path);

}  // namespace shifteval

#endif  // SHIFTEVAL_DATASET_HPP_
