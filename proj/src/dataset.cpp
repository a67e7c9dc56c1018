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

#include "shifteval/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "json.hpp"

namespace shifteval {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << text;
}

Box parse_bbox(const json& rec, const std::string& context) {
  if (!rec.contains("bbox") || !rec["bbox"].is_array() || rec["bbox"].size() != 4) {
    throw InputError(context + ": bbox must be an array of 4 numbers");
  }
  Box b{rec["bbox"][0].get<double>(), rec["bbox"][1].get<double>(),
        rec["bbox"][2].get<double>(), rec["bbox"][3].get<double>()};
  if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.w) || !std::isfinite(b.h) ||
      b.w < 0.0 || b.h < 0.0) {
    throw InputError(context + ": bbox is not a valid non-negative-size box");
  }
  return b;
}

// Serializes a double as a JSON integer when it is exactly integral, which
// keeps emitted COCO files shaped like hand-written ones.
ordered_json num_json(double v) {
  if (std::floor(v) == v && std::abs(v) < 9.0e15) {
    return ordered_json(static_cast<std::int64_t>(v));
  }
  return ordered_json(v);
}

}  // namespace

void GroundTruth::finalize() {
  std::stable_sort(images.begin(), images.end(),
                   [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
  std::stable_sort(categories.begin(), categories.end(),
                   [](const Category& a, const Category& b) { return a.id < b.id; });

  for (std::size_t i = 1; i < images.size(); ++i) {
    if (images[i].id == images[i - 1].id) {
      throw InputError("duplicate image_id " + std::to_string(images[i].id));
    }
  }
  for (std::size_t i = 1; i < categories.size(); ++i) {
    if (categories[i].id == categories[i - 1].id) {
      throw InputError("duplicate category_id " + std::to_string(categories[i].id));
    }
  }
  for (const auto& img : images) {
    if (!(img.width > 0.0) || !(img.height > 0.0)) {
      throw InputError("image " + std::to_string(img.id) + " has non-positive size");
    }
  }

  by_image_.clear();
  for (const auto& img : images) by_image_[img.id];
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto& ann = annotations[i];
    if (!has_category(ann.category_id)) {
      throw InputError("annotation " + std::to_string(ann.id) + ": unknown category " +
                       std::to_string(ann.category_id));
    }
    auto it = by_image_.find(ann.image_id);
    if (it == by_image_.end()) {
      throw InputError("annotation " + std::to_string(ann.id) + ": unknown image_id " +
                       std::to_string(ann.image_id));
    }
    const ImageRecord* img = find_image(ann.image_id);
    if (ann.box.x < 0.0 || ann.box.y < 0.0 || ann.box.x + ann.box.w > img->width ||
        ann.box.y + ann.box.h > img->height) {
      std::cerr << "warning: annotation " << ann.id << " extends outside image "
                << ann.image_id << "\n";
    }
    it->second.push_back(i);
  }
}

bool GroundTruth::has_category(int category_id) const {
  auto it = std::lower_bound(categories.begin(), categories.end(), category_id,
                             [](const Category& c, int id) { return c.id < id; });
  return it != categories.end() && it->id == category_id;
}

const ImageRecord* GroundTruth::find_image(std::int64_t image_id) const {
  auto it = std::lower_bound(images.begin(), images.end(), image_id,
                             [](const ImageRecord& r, std::int64_t id) { return r.id < id; });
  return (it != images.end() && it->id == image_id) ? &*it : nullptr;
}

const std::vector<std::size_t>& GroundTruth::annotations_of(std::int64_t image_id) const {
  auto it = by_image_.find(image_id);
  return it == by_image_.end() ? empty_ : it->second;
}

std::vector<std::int64_t> GroundTruth::image_ids() const {
  std::vector<std::int64_t> ids;
  ids.reserve(images.size());
  for (const auto& img : images) ids.push_back(img.id);
  return ids;
}

GroundTruth load_ground_truth(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("images") || !j.contains("annotations") ||
      !j.contains("categories")) {
    throw InputError(path + ": expected object with images/annotations/categories");
  }

  GroundTruth gt;
  for (const auto& rec : j["images"]) {
    ImageRecord img;
    img.id = rec.at("id").get<std::int64_t>();
    img.width = rec.at("width").get<double>();
    img.height = rec.at("height").get<double>();
    gt.images.push_back(img);
  }
  for (const auto& rec : j["categories"]) {
    gt.categories.push_back(Category{rec.at("id").get<int>(),
                                     rec.value("name", std::string{})});
  }
  std::size_t idx = 0;
  for (const auto& rec : j["annotations"]) {
    GroundTruthAnnotation ann;
    ann.id = rec.at("id").get<std::int64_t>();
    ann.image_id = rec.at("image_id").get<std::int64_t>();
    ann.category_id = rec.at("category_id").get<int>();
    ann.box = parse_bbox(rec, path + ": annotation " + std::to_string(idx));
    ann.ignore = rec.value("iscrowd", 0) != 0;
    gt.annotations.push_back(ann);
    ++idx;
  }
  try {
    gt.finalize();
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
  return gt;
}

void write_ground_truth(const GroundTruth& gt, const std::string& path) {
  ordered_json j;
  ordered_json images = ordered_json::array();
  for (const auto& img : gt.images) {
    ordered_json rec;
    rec["id"] = img.id;
    rec["width"] = num_json(img.width);
    rec["height"] = num_json(img.height);
    images.push_back(std::move(rec));
  }
  ordered_json annotations = ordered_json::array();
  for (const auto& ann : gt.annotations) {
    ordered_json rec;
    rec["id"] = ann.id;
    rec["image_id"] = ann.image_id;
    rec["category_id"] = ann.category_id;
    rec["bbox"] = {num_json(ann.box.x), num_json(ann.box.y), num_json(ann.box.w),
                   num_json(ann.box.h)};
    rec["area"] = num_json(ann.box.area());
    rec["iscrowd"] = ann.ignore ? 1 : 0;
    annotations.push_back(std::move(rec));
  }
  ordered_json categories = ordered_json::array();
  for (const auto& cat : gt.categories) {
    ordered_json rec;
    rec["id"] = cat.id;
    rec["name"] = cat.name;
    categories.push_back(std::move(rec));
  }
  j["images"] = std::move(images);
  j["annotations"] = std::move(annotations);
  j["categories"] = std::move(categories);
  write_text(path, j.dump(2) + "\n");
}

ShiftedPredictionSet::ShiftedPredictionSet(ShiftGrid grid, std::vector<std::int64_t> image_ids)
    : grid_(grid), image_ids_(std::move(image_ids)) {
  std::sort(image_ids_.begin(), image_ids_.end());
  image_ids_.erase(std::unique(image_ids_.begin(), image_ids_.end()), image_ids_.end());
  for (std::size_t i = 0; i < image_ids_.size(); ++i) index_[image_ids_[i]] = static_cast<int>(i);
  cells_.resize(image_ids_.size() * grid_.size());
  shift_observed_.assign(grid_.size(), false);
}

int ShiftedPredictionSet::image_index(std::int64_t image_id) const {
  auto it = index_.find(image_id);
  if (it == index_.end()) {
    throw InputError("unknown image_id " + std::to_string(image_id));
  }
  return it->second;
}

const std::vector<Detection>& ShiftedPredictionSet::detections(std::int64_t image_id,
                                                               Shift s) const {
  return cells_[static_cast<std::size_t>(image_index(image_id)) * grid_.size() +
                grid_.index_of(s)];
}

std::vector<Detection>& ShiftedPredictionSet::cell(std::int64_t image_id, Shift s) {
  return cells_[static_cast<std::size_t>(image_index(image_id)) * grid_.size() +
                grid_.index_of(s)];
}

std::size_t ShiftedPredictionSet::total_detections() const {
  std::size_t n = 0;
  for (const auto& c : cells_) n += c.size();
  return n;
}

void ShiftedPredictionSet::mark_shift_observed(Shift s) {
  shift_observed_[grid_.index_of(s)] = true;
}

bool ShiftedPredictionSet::shift_observed(Shift s) const {
  return shift_observed_[grid_.index_of(s)];
}

std::vector<Shift> ShiftedPredictionSet::missing_shifts() const {
  std::vector<Shift> missing;
  for (int i = 0; i < grid_.size(); ++i) {
    if (!shift_observed_[i]) missing.push_back(grid_.at(i));
  }
  return missing;
}

ShiftedPredictionSet ShiftedPredictionSet::restricted(int new_max_shift) const {
  if (new_max_shift > grid_.max_shift()) {
    throw std::invalid_argument("restricted: new grid must be nested in the old one");
  }
  ShiftedPredictionSet out(ShiftGrid(new_max_shift), image_ids_);
  for (int s = 0; s < out.grid_.size(); ++s) {
    const Shift sh = out.grid_.at(s);
    if (shift_observed_[grid_.index_of(sh)]) out.mark_shift_observed(sh);
    for (std::size_t i = 0; i < image_ids_.size(); ++i) {
      out.cells_[i * out.grid_.size() + s] = cells_[i * grid_.size() + grid_.index_of(sh)];
    }
  }
  return out;
}

namespace {

void ingest_detection_records(const json& records, const std::string& file_context,
                              const ShiftGrid& grid, PredictionFrame frame,
                              const std::optional<Shift>& file_shift,
                              ShiftedPredictionSet* set, std::int64_t* next_det_id) {
  if (!records.is_array()) throw InputError(file_context + ": expected a JSON array");
  std::size_t idx = 0;
  for (const auto& rec : records) {
    const std::string context = file_context + ": record " + std::to_string(idx);
    Shift shift;
    if (rec.contains("shift")) {
      if (!rec["shift"].is_array() || rec["shift"].size() != 2) {
        throw InputError(context + ": shift must be [dx, dy]");
      }
      shift = Shift{rec["shift"][0].get<int>(), rec["shift"][1].get<int>()};
    } else if (file_shift) {
      shift = *file_shift;
    } else if (grid.max_shift() == 0) {
      shift = Shift{0, 0};
    } else {
      throw InputError(context + ": missing shift information");
    }
    if (!grid.contains(shift)) {
      throw InputError(context + ": shift (" + std::to_string(shift.dx) + "," +
                       std::to_string(shift.dy) + ") outside grid with max_shift " +
                       std::to_string(grid.max_shift()));
    }

    Detection det;
    det.image_id = rec.at("image_id").get<std::int64_t>();
    det.category_id = rec.at("category_id").get<int>();
    det.box = parse_bbox(rec, context);
    det.score = rec.at("score").get<double>();
    if (!(det.score >= 0.0 && det.score <= 1.0)) {
      throw InputError(context + ": score " + std::to_string(det.score) +
                       " outside [0, 1]");
    }
    if (frame == PredictionFrame::kShifted) det.box = unapply_shift(det.box, shift);
    det.det_id = (*next_det_id)++;

    try {
      set->cell(det.image_id, shift).push_back(det);
    } catch (const InputError& e) {
      throw InputError(context + ": " + e.what());
    }
    set->mark_shift_observed(shift);
    ++idx;
  }
}

}  // namespace

ShiftedPredictionSet load_predictions(const std::string& path, const ShiftGrid& grid,
                                      PredictionFrame frame, const GroundTruth& gt) {
  ShiftedPredictionSet set(grid, gt.image_ids());
  std::int64_t next_det_id = 0;

  if (fs::is_directory(path)) {
    // Per-shift files, processed in grid (dy, dx) order so det_id assignment
    // is deterministic regardless of directory listing order.
    bool any = false;
    for (int i = 0; i < grid.size(); ++i) {
      const Shift s = grid.at(i);
      const fs::path file = fs::path(path) / ("shift_" + std::to_string(s.dx) + "_" +
                                              std::to_string(s.dy) + ".json");
      if (!fs::exists(file)) continue;
      any = true;
      set.mark_shift_observed(s);
      ingest_detection_records(parse_file(file.string()), file.string(), grid, frame, s, &set,
                               &next_det_id);
    }
    // Files for shifts outside the grid are an error, not silently ignored.
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string name = entry.path().filename().string();
      int dx = 0, dy = 0;
      if (std::sscanf(name.c_str(), "shift_%d_%d.json", &dx, &dy) == 2) {
        if (!grid.contains(Shift{dx, dy})) {
          throw InputError(entry.path().string() + ": shift (" + std::to_string(dx) + "," +
                           std::to_string(dy) + ") outside grid with max_shift " +
                           std::to_string(grid.max_shift()));
        }
      }
    }
    if (!any) throw InputError(path + ": no shift_<dx>_<dy>.json files found");
  } else if (fs::exists(path)) {
    ingest_detection_records(parse_file(path), path, grid, frame, std::nullopt, &set,
                             &next_det_id);
  } else {
    throw InputError("no such file or directory: " + path);
  }
  return set;
}

namespace {

ordered_json detection_to_json(const Detection& det, const Box& box, const Shift* shift) {
  ordered_json rec;
  rec["image_id"] = det.image_id;
  rec["category_id"] = det.category_id;
  rec["bbox"] = {num_json(box.x), num_json(box.y), num_json(box.w), num_json(box.h)};
  rec["score"] = det.score;
  if (shift != nullptr) rec["shift"] = {shift->dx, shift->dy};
  return rec;
}

}  // namespace

void write_predictions(const ShiftedPredictionSet& set, const std::string& dir,
                       PredictionFrame frame) {
  fs::create_directories(dir);
  for (int i = 0; i < set.grid().size(); ++i) {
    const Shift s = set.grid().at(i);
    ordered_json arr = ordered_json::array();
    for (std::size_t img = 0; img < set.image_ids().size(); ++img) {
      for (const Detection& det : set.cell_by_index(static_cast<int>(img), i)) {
        const Box box = frame == PredictionFrame::kShifted ? apply_shift(det.box, s) : det.box;
        arr.push_back(detection_to_json(det, box, nullptr));
      }
    }
    const fs::path file = fs::path(dir) / ("shift_" + std::to_string(s.dx) + "_" +
                                           std::to_string(s.dy) + ".json");
    write_text(file.string(), arr.dump(2) + "\n");
  }
}

void write_predictions_single(const ShiftedPredictionSet& set, const std::string& path,
                              PredictionFrame frame) {
  const bool with_shift = set.grid().max_shift() > 0;
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < set.grid().size(); ++i) {
    const Shift s = set.grid().at(i);
    for (std::size_t img = 0; img < set.image_ids().size(); ++img) {
      for (const Detection& det : set.cell_by_index(static_cast<int>(img), i)) {
        const Box box = frame == PredictionFrame::kShifted ? apply_shift(det.box, s) : det.box;
        arr.push_back(detection_to_json(det, box, with_shift ? &s : nullptr));
      }
    }
  }
  write_text(path, arr.dump(2) + "\n");
}

ShiftManifest emit_shift_manifest(const GroundTruth& gt, const ShiftGrid& grid) {
  if (gt.images.empty()) throw InputError("emit_shift_manifest: empty image table");
  ShiftManifest manifest;
  manifest.max_shift = grid.max_shift();
  manifest.canvas_policy = "minimal";
  for (const auto& img : gt.images) {
    for (int i = 0; i < grid.size(); ++i) {
      const Shift s = grid.at(i);
      ShiftManifestEntry entry;
      entry.image_id = img.id;
      entry.shifted_name = "img_" + std::to_string(img.id) + "_shift_" + std::to_string(s.dx) +
                           "_" + std::to_string(s.dy);
      entry.shift = s;
      entry.canvas_w = img.width + grid.max_shift();
      entry.canvas_h = img.height + grid.max_shift();
      manifest.entries.push_back(std::move(entry));
    }
  }
  return manifest;
}

void write_manifest(const ShiftManifest& manifest, const std::string& path) {
  ordered_json j;
  j["max_shift"] = manifest.max_shift;
  j["canvas_policy"] = manifest.canvas_policy;
  ordered_json entries = ordered_json::array();
  for (const auto& e : manifest.entries) {
    ordered_json rec;
    rec["image_id"] = e.image_id;
    rec["shifted_name"] = e.shifted_name;
    rec["shift"] = {e.shift.dx, e.shift.dy};
    rec["offset"] = {e.shift.dx, e.shift.dy};  // embed offset equals the shift
    rec["canvas"] = {num_json(e.canvas_w), num_json(e.canvas_h)};
    entries.push_back(std::move(rec));
  }
  j["entries"] = std::move(entries);
  write_text(path, j.dump(2) + "\n");
}

ShiftManifest load_manifest(const std::string& path) {
  const json j = parse_file(path);
  ShiftManifest manifest;
  manifest.max_shift = j.at("max_shift").get<int>();
  manifest.canvas_policy = j.value("canvas_policy", std::string{"minimal"});
  for (const auto& rec : j.at("entries")) {
    ShiftManifestEntry e;
    e.image_id = rec.at("image_id").get<std::int64_t>();
    e.shifted_name = rec.at("shifted_name").get<std::string>();
    e.shift = Shift{rec.at("shift")[0].get<int>(), rec.at("shift")[1].get<int>()};
    e.canvas_w = rec.at("canvas")[0].get<double>();
    e.canvas_h = rec.at("canvas")[1].get<double>();
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace shifteval
