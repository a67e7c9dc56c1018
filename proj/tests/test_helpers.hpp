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

#ifndef SHIFTEVAL_TESTS_TEST_HELPERS_HPP_
#define SHIFTEVAL_TESTS_TEST_HELPERS_HPP_

#include <cstdint>
#include <vector>

#include "shifteval/dataset.hpp"
#include "shifteval/evaluator.hpp"
#include "shifteval/rng.hpp"

namespace shifteval::testing {

/// Ground truth with n square images of the given size, no annotations yet.
inline GroundTruth make_gt(int n_images, double size, const std::vector<int>& category_ids) {
  GroundTruth gt;
  for (int i = 0; i < n_images; ++i) gt.images.push_back(ImageRecord{i + 1, size, size});
  for (const int c : category_ids) gt.categories.push_back(Category{c, "c" + std::to_string(c)});
  return gt;
}

inline GroundTruthAnnotation ann(std::int64_t id, std::int64_t image_id, int category_id,
                                 Box box, bool ignore = false) {
  return GroundTruthAnnotation{id, image_id, category_id, box, ignore};
}

inline Detection det(std::int64_t image_id, int category_id, Box box, double score,
                     std::int64_t det_id) {
  return Detection{image_id, category_id, box, score, det_id};
}

/// Coordinates on a 1/4-pixel grid: integer shifts and JSON round trips
/// reproduce the exact bits for these values.
inline double dyadic(Philox4x32& rng, double lo, double hi) {
  const double raw = lo + (hi - lo) * rng.next_unit();
  return std::round(raw * 4.0) / 4.0;
}

inline Box random_box(Philox4x32& rng, double canvas = 100.0) {
  Box b;
  b.w = dyadic(rng, 4.0, 24.0);
  b.h = dyadic(rng, 4.0, 24.0);
  b.x = dyadic(rng, 0.0, canvas - b.w);
  b.y = dyadic(rng, 0.0, canvas - b.h);
  return b;
}

/// Scores drawn from a small lattice so ties across images are frequent and
/// the tie-break order actually gets exercised.
inline double lattice_score(Philox4x32& rng) {
  return (1.0 + rng.next_below(19)) * 0.05;
}

struct RandomFixture {
  GroundTruth gt;
  ShiftedPredictionSet set;
};

/// A small random dataset with crowd regions, false positives, score ties
/// and shift-dependent detections; suitable for equivalence and bracketing
/// property tests.
inline RandomFixture random_fixture(std::uint64_t seed, int n_images, int max_shift,
                                    int n_categories = 2) {
  std::vector<int> cats;
  for (int c = 1; c <= n_categories; ++c) cats.push_back(c);
  GroundTruth gt = make_gt(n_images, 100.0, cats);

  Philox4x32 layout(seed, 0, 0, 0xA11CE5);
  std::int64_t ann_id = 1;
  std::vector<std::vector<GroundTruthAnnotation>> per_image(n_images);
  for (int i = 0; i < n_images; ++i) {
    const int n_objects = layout.next_int(1, 4);
    for (int k = 0; k < n_objects; ++k) {
      const bool crowd = layout.next_unit() < 0.15;
      per_image[i].push_back(ann(ann_id++, i + 1, layout.next_int(1, n_categories),
                                 random_box(layout), crowd));
    }
  }
  for (const auto& anns : per_image) {
    for (const auto& a : anns) gt.annotations.push_back(a);
  }
  gt.finalize();

  const ShiftGrid grid(max_shift);
  ShiftedPredictionSet set(grid, gt.image_ids());
  std::int64_t det_id = 0;
  for (int s = 0; s < grid.size(); ++s) {
    const Shift shift = grid.at(s);
    set.mark_shift_observed(shift);
    for (int i = 0; i < n_images; ++i) {
      Philox4x32 rng(seed, static_cast<std::uint32_t>(i + 1),
                     static_cast<std::uint32_t>(s) | 0x1000u, 0xDE7EC7);
      auto& cell = set.cell(i + 1, shift);
      for (const auto& a : per_image[i]) {
        if (rng.next_unit() < 0.3) continue;  // per-shift miss
        Box b = a.box;
        b.x += 0.25 * rng.next_int(-4, 4);
        b.y += 0.25 * rng.next_int(-4, 4);
        cell.push_back(det(i + 1, a.category_id, b, lattice_score(rng), det_id++));
      }
      const int n_fp = rng.next_int(0, 2);
      for (int f = 0; f < n_fp; ++f) {
        cell.push_back(det(i + 1, rng.next_int(1, n_categories), random_box(rng),
                           lattice_score(rng), det_id++));
      }
    }
  }
  return RandomFixture{std::move(gt), std::move(set)};
}

}  // namespace shifteval::testing

#endif  // SHIFTEVAL_TESTS_TEST_HELPERS_HPP_
