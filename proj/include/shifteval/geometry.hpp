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

#ifndef SHIFTEVAL_GEOMETRY_HPP_
#define SHIFTEVAL_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace shifteval {

/// Axis-aligned bounding box in pixel coordinates, COCO convention:
/// top-left corner plus size. Coordinates are real-valued, w >= 0, h >= 0.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
};

inline bool operator==(const Box& a, const Box& b) {
  return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
}
inline bool operator!=(const Box& a, const Box& b) { return !(a == b); }

/// Integer pixel offset applied to an image before inference.
struct Shift {
  int dx = 0;
  int dy = 0;
};

constexpr bool operator==(Shift a, Shift b) { return a.dx == b.dx && a.dy == b.dy; }
constexpr bool operator!=(Shift a, Shift b) { return !(a == b); }

/// Row-major ordering by (dy, dx); (0,0) sorts first. All tie-breaks and
/// enumeration orders that involve shifts use this order.
constexpr bool shift_lex_less(Shift a, Shift b) {
  if (a.dy != b.dy) return a.dy < b.dy;
  return a.dx < b.dx;
}

/// The shift set {(dx, dy) : 0 <= dx, dy <= M}, enumerated in (dy, dx) order
/// so that index 0 is always the un-shifted baseline (0,0).
class ShiftGrid {
 public:
  ShiftGrid() = default;
  explicit ShiftGrid(int max_shift) : max_shift_(max_shift) {
    if (max_shift < 0) throw std::invalid_argument("ShiftGrid: max_shift must be >= 0");
  }

  int max_shift() const { return max_shift_; }
  int size() const { return (max_shift_ + 1) * (max_shift_ + 1); }

  bool contains(Shift s) const {
    return s.dx >= 0 && s.dx <= max_shift_ && s.dy >= 0 && s.dy <= max_shift_;
  }

  int index_of(Shift s) const {
    if (!contains(s)) throw std::out_of_range("ShiftGrid: shift outside grid");
    return s.dy * (max_shift_ + 1) + s.dx;
  }

  Shift at(int index) const {
    if (index < 0 || index >= size()) throw std::out_of_range("ShiftGrid: bad index");
    const int side = max_shift_ + 1;
    return Shift{index % side, index / side};
  }

  std::vector<Shift> shifts() const {
    std::vector<Shift> out;
    out.reserve(size());
    for (int i = 0; i < size(); ++i) out.push_back(at(i));
    return out;
  }

 private:
  int max_shift_ = 0;
};

inline bool operator==(const ShiftGrid& a, const ShiftGrid& b) {
  return a.max_shift() == b.max_shift();
}

/// Intersection over union. Degenerate input (zero union) yields 0.
inline double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  if (iw <= 0.0) return 0.0;
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// Translate a box into the shifted-canvas frame.
inline Box apply_shift(const Box& b, Shift s) {
  return Box{b.x + s.dx, b.y + s.dy, b.w, b.h};
}

/// Map a box from the shifted-canvas frame back to the original frame.
inline Box unapply_shift(const Box& b, Shift s) {
  return Box{b.x - s.dx, b.y - s.dy, b.w, b.h};
}

}  // namespace shifteval

#endif  // SHIFTEVAL_GEOMETRY_HPP_
