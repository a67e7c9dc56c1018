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
#include "doctest.h"
#include "shifteval/geometry.hpp"
#include "shifteval/rng.hpp"
#include "test_helpers.hpp"

using namespace shifteval;
using shifteval::testing::random_box;

TEST_CASE("iou identity and disjoint cases") {
  CHECK(iou(Box{0, 0, 10, 10}, Box{0, 0, 10, 10}) == 1.0);
  CHECK(iou(Box{0, 0, 10, 10}, Box{20, 20, 5, 5}) == 0.0);
}

TEST_CASE("iou partial overlap: intersection 2, union 6") {
  CHECK(iou(Box{0, 0, 2, 2}, Box{1, 0, 2, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("iou degenerate boxes yield 0") {
  CHECK(iou(Box{0, 0, 0, 0}, Box{0, 0, 0, 0}) == 0.0);
  CHECK(iou(Box{5, 5, 0, 10}, Box{5, 5, 10, 10}) == 0.0);
  CHECK(Box{5, 5, 0, 10}.area() == 0.0);
}

TEST_CASE("apply_shift translates, identity shift is a no-op") {
  CHECK(apply_shift(Box{5, 5, 2, 2}, Shift{1, 0}) == Box{6, 5, 2, 2});
  CHECK(apply_shift(Box{5, 5, 2, 2}, Shift{0, 0}) == Box{5, 5, 2, 2});
  CHECK(unapply_shift(Box{6, 5, 2, 2}, Shift{1, 0}) == Box{5, 5, 2, 2});
  CHECK(unapply_shift(Box{5, 5, 2, 2}, Shift{0, 0}) == Box{5, 5, 2, 2});
}

TEST_CASE("shift round trip is exact on sub-pixel grids") {
  Philox4x32 rng(42, 0, 0, 1);
  for (int i = 0; i < 2000; ++i) {
    const Box b = random_box(rng);
    const Shift s{static_cast<int>(rng.next_below(16)), static_cast<int>(rng.next_below(16))};
    CHECK(unapply_shift(apply_shift(b, s), s) == b);
    CHECK(apply_shift(unapply_shift(b, s), s) == b);
  }
}

TEST_CASE("iou is symmetric, bounded and shift-equivariant") {
  Philox4x32 rng(7, 0, 0, 2);
  for (int i = 0; i < 2000; ++i) {
    const Box a = random_box(rng);
    const Box b = random_box(rng);
    const double v = iou(a, b);
    CHECK(v == iou(b, a));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    const Shift s{static_cast<int>(rng.next_below(8)), static_cast<int>(rng.next_below(8))};
    CHECK(iou(apply_shift(a, s), apply_shift(b, s)) == v);
  }
}

TEST_CASE("iou of a box with itself is 1 when the area is positive") {
  Philox4x32 rng(11, 0, 0, 3);
  for (int i = 0; i < 200; ++i) {
    const Box b = random_box(rng);
    CHECK(iou(b, b) == 1.0);
  }
}

TEST_CASE("ShiftGrid enumerates (dy, dx) row-major with (0,0) first") {
  const ShiftGrid grid(1);
  CHECK(grid.size() == 4);
  CHECK(grid.at(0) == Shift{0, 0});
  CHECK(grid.at(1) == Shift{1, 0});
  CHECK(grid.at(2) == Shift{0, 1});
  CHECK(grid.at(3) == Shift{1, 1});
  for (int i = 0; i < grid.size(); ++i) CHECK(grid.index_of(grid.at(i)) == i);
  CHECK(grid.contains(Shift{1, 1}));
  CHECK(!grid.contains(Shift{2, 0}));
  CHECK(!grid.contains(Shift{-1, 0}));
  CHECK_THROWS_AS(grid.index_of(Shift{2, 0}), std::out_of_range);
}

TEST_CASE("ShiftGrid cardinality is (M+1)^2 and rejects negative M") {
  CHECK(ShiftGrid(0).size() == 1);
  CHECK(ShiftGrid(3).size() == 16);
  CHECK(ShiftGrid(15).size() == 256);
  CHECK_THROWS_AS(ShiftGrid(-1), std::invalid_argument);
}

TEST_CASE("shift_lex_less orders by (dy, dx)") {
  CHECK(shift_lex_less(Shift{1, 0}, Shift{0, 1}));
  CHECK(shift_lex_less(Shift{0, 0}, Shift{1, 0}));
  CHECK(!shift_lex_less(Shift{0, 1}, Shift{1, 0}));
  CHECK(!shift_lex_less(Shift{0, 0}, Shift{0, 0}));
}
