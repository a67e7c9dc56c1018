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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "shifteval/dataset.hpp"
#include "test_helpers.hpp"

using namespace shifteval;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("shifteval_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

const char* kMinimalGt = R"({
  "images": [{"id": 1, "width": 100, "height": 100}],
  "annotations": [{"id": 1, "image_id": 1, "category_id": 7, "bbox": [10, 10, 20, 20], "iscrowd": 0}],
  "categories": [{"id": 7, "name": "widget"}]
})";

}  // namespace

TEST_CASE("load_ground_truth: minimal valid file") {
  const auto dir = temp_dir("gt_minimal");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  CHECK(gt.images.size() == 1);
  CHECK(gt.annotations.size() == 1);
  CHECK(gt.categories.size() == 1);
  CHECK(gt.annotations[0].box == Box{10, 10, 20, 20});
  CHECK(!gt.annotations[0].ignore);
}

TEST_CASE("load_ground_truth: unknown category is an error") {
  const auto dir = temp_dir("gt_unknown_cat");
  write_file(dir / "gt.json", R"({
    "images": [{"id": 1, "width": 100, "height": 100}],
    "annotations": [{"id": 1, "image_id": 1, "category_id": 9, "bbox": [0, 0, 5, 5]}],
    "categories": [{"id": 7, "name": "widget"}]
  })");
  CHECK_THROWS_WITH_AS(load_ground_truth((dir / "gt.json").string()),
                       doctest::Contains("unknown category"), InputError);
}

TEST_CASE("load_ground_truth: duplicate image id is an error") {
  const auto dir = temp_dir("gt_dup_image");
  write_file(dir / "gt.json", R"({
    "images": [{"id": 1, "width": 100, "height": 100}, {"id": 1, "width": 50, "height": 50}],
    "annotations": [],
    "categories": [{"id": 7, "name": "widget"}]
  })");
  CHECK_THROWS_WITH_AS(load_ground_truth((dir / "gt.json").string()),
                       doctest::Contains("duplicate image_id"), InputError);
}

TEST_CASE("load_ground_truth: iscrowd maps to ignore") {
  const auto dir = temp_dir("gt_crowd");
  write_file(dir / "gt.json", R"({
    "images": [{"id": 1, "width": 100, "height": 100}],
    "annotations": [
      {"id": 1, "image_id": 1, "category_id": 7, "bbox": [0, 0, 5, 5], "iscrowd": 1},
      {"id": 2, "image_id": 1, "category_id": 7, "bbox": [10, 10, 5, 5], "iscrowd": 0}
    ],
    "categories": [{"id": 7, "name": "widget"}]
  })");
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  CHECK(gt.annotations[0].ignore);
  CHECK(!gt.annotations[1].ignore);
}

TEST_CASE("load_ground_truth: parse error names the file") {
  const auto dir = temp_dir("gt_bad_json");
  write_file(dir / "gt.json", "{ not json");
  CHECK_THROWS_WITH_AS(load_ground_truth((dir / "gt.json").string()),
                       doctest::Contains("gt.json"), InputError);
}

TEST_CASE("load_predictions: per-shift files form a complete M=1 set") {
  const auto dir = temp_dir("preds_m1");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  write_file(dir / "shift_0_0.json",
             R"([{"image_id": 1, "category_id": 7, "bbox": [10, 10, 20, 20], "score": 0.9}])");
  write_file(dir / "shift_0_1.json", "[]");
  write_file(dir / "shift_1_0.json", "[]");
  write_file(dir / "shift_1_1.json",
             R"([{"image_id": 1, "category_id": 7, "bbox": [11, 11, 20, 20], "score": 0.8}])");
  const auto set = load_predictions(dir.string(), ShiftGrid(1), PredictionFrame::kShifted, gt);
  CHECK(set.grid().size() == 4);
  CHECK(set.missing_shifts().empty());
  CHECK(set.detections(1, Shift{0, 0}).size() == 1);
  CHECK(set.detections(1, Shift{0, 1}).empty());
  // shifted frame: the (1,1) box de-shifts back onto the annotation
  CHECK(set.detections(1, Shift{1, 1})[0].box == Box{10, 10, 20, 20});
}

TEST_CASE("load_predictions: shift outside grid is an error") {
  const auto dir = temp_dir("preds_outside");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  write_file(dir / "preds.json",
             R"([{"image_id": 1, "category_id": 7, "bbox": [0, 0, 5, 5], "score": 0.5, "shift": [2, 0]}])");
  CHECK_THROWS_WITH_AS(
      load_predictions((dir / "preds.json").string(), ShiftGrid(1), PredictionFrame::kShifted, gt),
      doctest::Contains("outside grid"), InputError);
}

TEST_CASE("load_predictions: out-of-range score is an error naming the record") {
  const auto dir = temp_dir("preds_score");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  write_file(dir / "preds.json",
             R"([{"image_id": 1, "category_id": 7, "bbox": [0, 0, 5, 5], "score": 1.5}])");
  CHECK_THROWS_WITH_AS(
      load_predictions((dir / "preds.json").string(), ShiftGrid(0), PredictionFrame::kShifted, gt),
      doctest::Contains("record 0"), InputError);
}

TEST_CASE("load_predictions: missing shift info under M>0 is an error") {
  const auto dir = temp_dir("preds_noshift");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  write_file(dir / "preds.json",
             R"([{"image_id": 1, "category_id": 7, "bbox": [0, 0, 5, 5], "score": 0.5}])");
  CHECK_THROWS_WITH_AS(
      load_predictions((dir / "preds.json").string(), ShiftGrid(1), PredictionFrame::kShifted, gt),
      doctest::Contains("missing shift"), InputError);
  // ... but under the trivial grid the whole file is the (0,0) cell.
  const auto set =
      load_predictions((dir / "preds.json").string(), ShiftGrid(0), PredictionFrame::kShifted, gt);
  CHECK(set.detections(1, Shift{0, 0}).size() == 1);
}

TEST_CASE("load_predictions: shifted frame unapplies the shift") {
  const auto dir = temp_dir("preds_frame");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  write_file(dir / "preds.json",
             R"([{"image_id": 1, "category_id": 7, "bbox": [6, 5, 2, 2], "score": 0.5, "shift": [1, 0]}])");
  const auto shifted =
      load_predictions((dir / "preds.json").string(), ShiftGrid(1), PredictionFrame::kShifted, gt);
  CHECK(shifted.detections(1, Shift{1, 0})[0].box == Box{5, 5, 2, 2});
  const auto canonical = load_predictions((dir / "preds.json").string(), ShiftGrid(1),
                                          PredictionFrame::kCanonical, gt);
  CHECK(canonical.detections(1, Shift{1, 0})[0].box == Box{6, 5, 2, 2});
}

TEST_CASE("load_predictions: missing cells are empty, observed shifts tracked") {
  const auto dir = temp_dir("preds_missing");
  write_file(dir / "gt.json", kMinimalGt);
  const GroundTruth gt = load_ground_truth((dir / "gt.json").string());
  write_file(dir / "shift_0_0.json", "[]");
  const auto set = load_predictions(dir.string(), ShiftGrid(1), PredictionFrame::kShifted, gt);
  CHECK(set.detections(1, Shift{1, 1}).empty());
  const auto missing = set.missing_shifts();
  CHECK(missing.size() == 3);
  CHECK(set.shift_observed(Shift{0, 0}));
  CHECK(!set.shift_observed(Shift{1, 1}));
}

TEST_CASE("ingest is lossless modulo frame") {
  const auto fixture = shifteval::testing::random_fixture(99, 4, 1);
  const auto dir = temp_dir("roundtrip");

  // write shifted-frame files, reload as shifted
  write_predictions(fixture.set, dir.string(), PredictionFrame::kShifted);
  const auto reloaded =
      load_predictions(dir.string(), fixture.set.grid(), PredictionFrame::kShifted, fixture.gt);

  // re-serialize in canonical frame, reload as canonical
  const auto dir2 = temp_dir("roundtrip2");
  write_predictions(reloaded, dir2.string(), PredictionFrame::kCanonical);
  const auto reloaded2 =
      load_predictions(dir2.string(), fixture.set.grid(), PredictionFrame::kCanonical, fixture.gt);

  for (const auto id : fixture.set.image_ids()) {
    for (int s = 0; s < fixture.set.grid().size(); ++s) {
      const Shift shift = fixture.set.grid().at(s);
      const auto& a = fixture.set.detections(id, shift);
      const auto& b = reloaded.detections(id, shift);
      const auto& c = reloaded2.detections(id, shift);
      REQUIRE(a.size() == b.size());
      REQUIRE(a.size() == c.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].box == b[k].box);
        CHECK(a[k].score == b[k].score);
        CHECK(b[k].box == c[k].box);
        CHECK(b[k].det_id == c[k].det_id);
        CHECK(b[k].category_id == c[k].category_id);
      }
    }
  }
}

TEST_CASE("det_id assignment is deterministic for identical inputs") {
  const auto fixture = shifteval::testing::random_fixture(123, 3, 1);
  const auto dir = temp_dir("detid");
  write_predictions(fixture.set, dir.string(), PredictionFrame::kShifted);
  const auto a =
      load_predictions(dir.string(), fixture.set.grid(), PredictionFrame::kShifted, fixture.gt);
  const auto b =
      load_predictions(dir.string(), fixture.set.grid(), PredictionFrame::kShifted, fixture.gt);
  for (const auto id : a.image_ids()) {
    for (int s = 0; s < a.grid().size(); ++s) {
      const auto& da = a.detections(id, a.grid().at(s));
      const auto& db = b.detections(id, b.grid().at(s));
      REQUIRE(da.size() == db.size());
      for (std::size_t k = 0; k < da.size(); ++k) CHECK(da[k].det_id == db[k].det_id);
    }
  }
}

TEST_CASE("emit_shift_manifest: example 4x4 image, M=1") {
  GroundTruth gt;
  gt.images.push_back(ImageRecord{1, 4, 4});
  gt.categories.push_back(Category{1, "c"});
  gt.finalize();
  const ShiftManifest manifest = emit_shift_manifest(gt, ShiftGrid(1));
  REQUIRE(manifest.entries.size() == 4);
  std::vector<Shift> offsets;
  for (const auto& e : manifest.entries) {
    CHECK(e.canvas_w == 5.0);
    CHECK(e.canvas_h == 5.0);
    offsets.push_back(e.shift);
  }
  CHECK(offsets == std::vector<Shift>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

TEST_CASE("emit_shift_manifest: degenerate and multi-image counts") {
  GroundTruth gt1 = shifteval::testing::make_gt(1, 32.0, {1});
  gt1.finalize();
  CHECK(emit_shift_manifest(gt1, ShiftGrid(0)).entries.size() == 1);
  CHECK(emit_shift_manifest(gt1, ShiftGrid(0)).entries[0].shift == Shift{0, 0});

  GroundTruth gt2 = shifteval::testing::make_gt(2, 32.0, {1});
  gt2.finalize();
  CHECK(emit_shift_manifest(gt2, ShiftGrid(3)).entries.size() == 32);

  GroundTruth empty;
  empty.categories.push_back(Category{1, "c"});
  empty.finalize();
  CHECK_THROWS_AS(emit_shift_manifest(empty, ShiftGrid(1)), InputError);
}

TEST_CASE("manifest writes and reloads") {
  GroundTruth gt = shifteval::testing::make_gt(2, 64.0, {1});
  gt.finalize();
  const auto dir = temp_dir("manifest");
  const ShiftManifest manifest = emit_shift_manifest(gt, ShiftGrid(2));
  write_manifest(manifest, (dir / "manifest.json").string());
  const ShiftManifest loaded = load_manifest((dir / "manifest.json").string());
  CHECK(loaded.max_shift == 2);
  CHECK(loaded.canvas_policy == "minimal");
  REQUIRE(loaded.entries.size() == manifest.entries.size());
  CHECK(loaded.entries[3].shifted_name == manifest.entries[3].shifted_name);
  CHECK(loaded.entries[3].shift == manifest.entries[3].shift);

  // byte-identical rewrite
  write_manifest(loaded, (dir / "manifest2.json").string());
  CHECK(read_file(dir / "manifest.json") == read_file(dir / "manifest2.json"));
}

TEST_CASE("restricted keeps nested-grid cells and det_ids") {
  const auto fixture = shifteval::testing::random_fixture(5, 3, 2);
  const auto small = fixture.set.restricted(1);
  CHECK(small.grid().max_shift() == 1);
  for (const auto id : small.image_ids()) {
    for (int s = 0; s < small.grid().size(); ++s) {
      const Shift shift = small.grid().at(s);
      const auto& a = fixture.set.detections(id, shift);
      const auto& b = small.detections(id, shift);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].det_id == b[k].det_id);
    }
  }
}
