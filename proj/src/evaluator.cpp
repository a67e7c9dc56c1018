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

#include "shifteval/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "shifteval/parallel.hpp"

namespace shifteval {

using detail::StreamEntry;
using detail::stream_less;

std::vector<double> linspace(double start, double stop, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = static_cast<double>(i) * (stop - start) / static_cast<double>(n - 1) + start;
  }
  return out;
}

std::vector<double> default_iou_thresholds() { return linspace(0.5, 0.95, 10); }

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw std::invalid_argument("EvalConfig: no IoU thresholds");
  if (iou_thresholds.size() > 32) throw std::invalid_argument("EvalConfig: too many thresholds");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("EvalConfig: thresholds must be in (0, 1]");
    if (i > 0 && !(t > iou_thresholds[i - 1])) {
      throw std::invalid_argument("EvalConfig: thresholds must be strictly increasing");
    }
  }
  if (recall_points < 2) throw std::invalid_argument("EvalConfig: recall_points must be >= 2");
  if (max_dets < 1) throw std::invalid_argument("EvalConfig: max_dets must be >= 1");
  if (!(area_min >= 0.0) || !(area_max >= area_min)) {
    throw std::invalid_argument("EvalConfig: invalid area range");
  }
}

int EvalConfig::threshold_index(double t) const {
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    if (iou_thresholds[i] == t) return static_cast<int>(i);
  }
  return -1;
}

const CategoryMatch* ImageMatchResult::find(int category_id) const {
  for (const auto& cm : categories) {
    if (cm.category_id == category_id) return &cm;
  }
  return nullptr;
}

namespace {

bool effective_ignore(const GroundTruthAnnotation& ann, const EvalConfig& cfg) {
  const double a = ann.box.area();
  return ann.ignore || a < cfg.area_min || a > cfg.area_max;
}

// Matching overlap: standard IoU, except that crowd regions use
// intersection over detection area so a detection inside a crowd always
// qualifies regardless of the crowd's extent.
double match_iou(const Box& det, const Box& gt, bool crowd) {
  const double iw = std::min(det.x + det.w, gt.x + gt.w) - std::max(det.x, gt.x);
  if (iw <= 0.0) return 0.0;
  const double ih = std::min(det.y + det.h, gt.y + gt.h) - std::max(det.y, gt.y);
  if (ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = crowd ? det.area() : det.area() + gt.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace

ImageMatchResult match_image(const std::vector<Detection>& detections,
                             const std::vector<GroundTruthAnnotation>& ground_truths,
                             const EvalConfig& config) {
  config.validate();
  const int n_thr = static_cast<int>(config.iou_thresholds.size());

  std::set<int> category_ids;
  for (const auto& d : detections) category_ids.insert(d.category_id);
  for (const auto& g : ground_truths) category_ids.insert(g.category_id);

  ImageMatchResult result;
  for (int cat : category_ids) {
    CategoryMatch cm;
    cm.category_id = cat;

    std::vector<const Detection*> dets;
    for (const auto& d : detections) {
      if (d.category_id == cat) dets.push_back(&d);
    }
    std::sort(dets.begin(), dets.end(), [](const Detection* a, const Detection* b) {
      if (a->score != b->score) return a->score > b->score;
      return a->det_id < b->det_id;
    });
    if (static_cast<int>(dets.size()) > config.max_dets) dets.resize(config.max_dets);

    // Ground truths of this category, counted ones first, file order within
    // each group; the iteration order below is part of the match protocol.
    std::vector<const GroundTruthAnnotation*> gts;
    for (const auto& g : ground_truths) {
      if (g.category_id == cat) gts.push_back(&g);
    }
    std::stable_sort(gts.begin(), gts.end(),
                     [&](const GroundTruthAnnotation* a, const GroundTruthAnnotation* b) {
                       return static_cast<int>(effective_ignore(*a, config)) <
                              static_cast<int>(effective_ignore(*b, config));
                     });

    const std::size_t n_det = dets.size();
    const std::size_t n_gt = gts.size();
    std::vector<bool> gt_ignore(n_gt);
    for (std::size_t g = 0; g < n_gt; ++g) {
      gt_ignore[g] = effective_ignore(*gts[g], config);
      if (!gt_ignore[g]) ++cm.gt_count;
    }

    std::vector<double> ious(n_det * n_gt);
    for (std::size_t d = 0; d < n_det; ++d) {
      for (std::size_t g = 0; g < n_gt; ++g) {
        ious[d * n_gt + g] = match_iou(dets[d]->box, gts[g]->box, gts[g]->ignore);
      }
    }

    cm.scores.resize(n_det);
    cm.det_ids.resize(n_det);
    cm.tp_bits.assign(n_det, 0);
    cm.ignore_bits.assign(n_det, 0);
    cm.matched_gt.assign(n_thr, std::vector<std::int64_t>(n_det, -1));
    for (std::size_t d = 0; d < n_det; ++d) {
      cm.scores[d] = dets[d]->score;
      cm.det_ids[d] = dets[d]->det_id;
    }

    for (int t = 0; t < n_thr; ++t) {
      const std::uint32_t bit = 1u << t;
      std::vector<bool> gt_matched(n_gt, false);
      for (std::size_t d = 0; d < n_det; ++d) {
        double best = std::min(config.iou_thresholds[t], 1.0 - 1e-10);
        std::ptrdiff_t m = -1;
        for (std::size_t g = 0; g < n_gt; ++g) {
          // a matched non-crowd GT is consumed; crowds absorb repeatedly
          if (gt_matched[g] && !gts[g]->ignore) continue;
          // counted GTs come first; once matched to one, stop at the ignores
          if (m > -1 && !gt_ignore[m] && gt_ignore[g]) break;
          const double o = ious[d * n_gt + g];
          if (o < best) continue;
          best = o;
          m = static_cast<std::ptrdiff_t>(g);
        }
        if (m > -1) {
          gt_matched[m] = true;
          cm.matched_gt[t][d] = gts[m]->id;
          if (gt_ignore[m]) {
            cm.ignore_bits[d] |= bit;
          } else {
            cm.tp_bits[d] |= bit;
          }
        } else {
          const double a = dets[d]->box.area();
          if (a < config.area_min || a > config.area_max) cm.ignore_bits[d] |= bit;
        }
      }
    }
    result.categories.push_back(std::move(cm));
  }
  return result;
}

namespace {

// Interpolated AP of one category at one threshold. `stream` is the
// category's dataset-wide detection stream in stream_less order; npig > 0.
double threshold_ap(const std::vector<StreamEntry>& stream, long npig, int t,
                    const std::vector<double>& recall_thresholds, std::vector<double>& rc,
                    std::vector<double>& pr) {
  const std::size_t n = stream.size();
  const std::uint32_t bit = 1u << t;
  const double eps = std::numeric_limits<double>::epsilon();
  rc.resize(n);
  pr.resize(n);
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (stream[i].tp_bits & bit) {
      tp += 1.0;
    } else if (!(stream[i].ignore_bits & bit)) {
      fp += 1.0;
    }
    rc[i] = tp / static_cast<double>(npig);
    pr[i] = tp / (fp + tp + eps);
  }
  for (std::size_t i = n; i-- > 1;) {
    if (pr[i] > pr[i - 1]) pr[i - 1] = pr[i];
  }
  double sum = 0.0;
  std::size_t pi = 0;
  for (const double r : recall_thresholds) {
    while (pi < n && rc[pi] < r) ++pi;
    if (pi >= n) break;  // sample stays 0 past the achieved recall
    sum += pr[pi];
  }
  return sum / static_cast<double>(recall_thresholds.size());
}

ApResult accumulate_streams(const std::vector<std::vector<StreamEntry>>& streams,
                            const std::vector<int>& category_ids,
                            const std::vector<long>& gt_counts, const EvalConfig& config) {
  const int n_thr = static_cast<int>(config.iou_thresholds.size());
  const std::vector<double> recall_thresholds = linspace(0.0, 1.0, config.recall_points);
  const int i50 = config.ap50_index();

  ApResult res;
  res.per_threshold.resize(n_thr);
  for (int t = 0; t < n_thr; ++t) res.per_threshold[t].iou_threshold = config.iou_thresholds[t];

  std::vector<double> thr_sum(n_thr, 0.0);
  double ap_sum = 0.0;
  double ap50_sum = 0.0;
  int valid = 0;
  std::vector<double> rc, pr;

  for (std::size_t c = 0; c < category_ids.size(); ++c) {
    CategoryAp cat;
    cat.category_id = category_ids[c];
    if (gt_counts[c] == 0) {
      res.per_category.push_back(cat);  // sentinel -1, excluded from means
      continue;
    }
    ++valid;
    double cat_sum = 0.0;
    double cat50 = std::numeric_limits<double>::quiet_NaN();
    for (int t = 0; t < n_thr; ++t) {
      const double ap_ct = threshold_ap(streams[c], gt_counts[c], t, recall_thresholds, rc, pr);
      cat_sum += ap_ct;
      thr_sum[t] += ap_ct;
      if (t == i50) cat50 = ap_ct;
    }
    cat.ap = cat_sum / static_cast<double>(n_thr);
    cat.ap50 = cat50;
    res.per_category.push_back(cat);
    ap_sum += cat.ap;
    ap50_sum += cat50;
  }

  if (valid > 0) {
    res.ap = ap_sum / static_cast<double>(valid);
    res.ap50 = ap50_sum / static_cast<double>(valid);
    for (int t = 0; t < n_thr; ++t) res.per_threshold[t].ap = thr_sum[t] / static_cast<double>(valid);
  }
  return res;
}

double accumulate_streams_objective(const std::vector<std::vector<StreamEntry>>& streams,
                                    const std::vector<long>& gt_counts, const EvalConfig& config,
                                    Objective objective, std::vector<double>& rc,
                                    std::vector<double>& pr) {
  const std::vector<double> recall_thresholds = linspace(0.0, 1.0, config.recall_points);
  const int n_thr = static_cast<int>(config.iou_thresholds.size());
  double sum = 0.0;
  int valid = 0;
  if (objective == Objective::kAp50) {
    const int i50 = config.ap50_index();
    if (i50 < 0) throw std::invalid_argument("ap50 objective needs a 0.5 IoU threshold");
    for (std::size_t c = 0; c < streams.size(); ++c) {
      if (gt_counts[c] == 0) continue;
      ++valid;
      sum += threshold_ap(streams[c], gt_counts[c], i50, recall_thresholds, rc, pr);
    }
  } else {
    for (std::size_t c = 0; c < streams.size(); ++c) {
      if (gt_counts[c] == 0) continue;
      ++valid;
      double cat_sum = 0.0;
      for (int t = 0; t < n_thr; ++t) {
        cat_sum += threshold_ap(streams[c], gt_counts[c], t, recall_thresholds, rc, pr);
      }
      sum += cat_sum / static_cast<double>(n_thr);
    }
  }
  return valid > 0 ? sum / static_cast<double>(valid) : -1.0;
}

struct CategoryTable {
  std::vector<int> ids;          // ascending
  std::vector<long> gt_counts;   // non-ignored GT per category
  std::map<int, int> index;
};

CategoryTable category_table(const GroundTruth& gt, const EvalConfig& config) {
  CategoryTable table;
  for (const auto& c : gt.categories) {
    table.index[c.id] = static_cast<int>(table.ids.size());
    table.ids.push_back(c.id);
  }
  table.gt_counts.assign(table.ids.size(), 0);
  for (const auto& ann : gt.annotations) {
    if (!effective_ignore(ann, config)) ++table.gt_counts[table.index.at(ann.category_id)];
  }
  return table;
}

void append_category_match(const CategoryMatch& cm, std::uint32_t image_index,
                           std::vector<StreamEntry>* stream) {
  for (std::size_t k = 0; k < cm.scores.size(); ++k) {
    stream->push_back(StreamEntry{cm.scores[k], cm.det_ids[k], image_index, cm.tp_bits[k],
                                  cm.ignore_bits[k]});
  }
}

}  // namespace

bool bit_equal(const ApResult& a, const ApResult& b) {
  auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  if (!same(a.ap, b.ap) || !same(a.ap50, b.ap50)) return false;
  if (a.per_category.size() != b.per_category.size()) return false;
  for (std::size_t i = 0; i < a.per_category.size(); ++i) {
    if (a.per_category[i].category_id != b.per_category[i].category_id ||
        !same(a.per_category[i].ap, b.per_category[i].ap) ||
        !same(a.per_category[i].ap50, b.per_category[i].ap50)) {
      return false;
    }
  }
  if (a.per_threshold.size() != b.per_threshold.size()) return false;
  for (std::size_t i = 0; i < a.per_threshold.size(); ++i) {
    if (a.per_threshold[i].iou_threshold != b.per_threshold[i].iou_threshold ||
        !same(a.per_threshold[i].ap, b.per_threshold[i].ap)) {
      return false;
    }
  }
  return true;
}

double objective_of(const ApResult& r, Objective objective) {
  return objective == Objective::kAp50 ? r.ap50 : r.ap;
}

ShiftAssignment zero_assignment(const GroundTruth& gt) {
  ShiftAssignment a;
  for (const auto& img : gt.images) a[img.id] = Shift{0, 0};
  return a;
}

ApResult compute_ap(const ShiftAssignment& selection, const ShiftedPredictionSet& set,
                    const GroundTruth& gt, const EvalConfig& config) {
  config.validate();
  const std::vector<std::int64_t> ids = gt.image_ids();
  if (set.image_ids() != ids) {
    throw InputError("prediction set and ground truth cover different image sets");
  }
  for (const auto& [image_id, shift] : selection) {
    if (gt.find_image(image_id) == nullptr) {
      throw InputError("selection names unknown image_id " + std::to_string(image_id));
    }
    if (!set.grid().contains(shift)) {
      throw InputError("selection shift outside grid for image_id " + std::to_string(image_id));
    }
  }

  const CategoryTable table = category_table(gt, config);
  std::vector<std::vector<StreamEntry>> streams(table.ids.size());

  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto it = selection.find(ids[i]);
    if (it == selection.end()) {
      throw InputError("incomplete selection: no shift for image_id " + std::to_string(ids[i]));
    }
    std::vector<GroundTruthAnnotation> anns;
    for (const std::size_t idx : gt.annotations_of(ids[i])) anns.push_back(gt.annotations[idx]);
    const ImageMatchResult mr = match_image(set.detections(ids[i], it->second), anns, config);
    for (const auto& cm : mr.categories) {
      const auto cit = table.index.find(cm.category_id);
      if (cit == table.index.end()) continue;  // detections of undeclared categories
      append_category_match(cm, static_cast<std::uint32_t>(i), &streams[cit->second]);
    }
  }
  for (auto& s : streams) std::sort(s.begin(), s.end(), stream_less);
  return accumulate_streams(streams, table.ids, table.gt_counts, config);
}

EvalCache::EvalCache(const ShiftedPredictionSet& set, const GroundTruth& gt, EvalConfig config,
                     int threads)
    : grid_(set.grid()), config_(std::move(config)) {
  config_.validate();
  image_ids_ = set.image_ids();
  if (image_ids_ != gt.image_ids()) {
    throw InputError("prediction set and ground truth cover different image sets");
  }

  const CategoryTable table = category_table(gt, config_);
  category_ids_ = table.ids;
  gt_counts_ = table.gt_counts;

  const std::size_t n_images = image_ids_.size();
  const std::size_t n_shifts = static_cast<std::size_t>(grid_.size());
  const std::size_t n_cats = category_ids_.size();

  std::vector<std::vector<GroundTruthAnnotation>> gt_by_image(n_images);
  for (std::size_t i = 0; i < n_images; ++i) {
    for (const std::size_t idx : gt.annotations_of(image_ids_[i])) {
      gt_by_image[i].push_back(gt.annotations[idx]);
    }
  }

  cells_.resize(n_images * n_shifts * n_cats);
  parallel_for(n_images * n_shifts, threads, [&](std::size_t k) {
    const int img = static_cast<int>(k / n_shifts);
    const int s = static_cast<int>(k % n_shifts);
    const ImageMatchResult mr =
        match_image(set.cell_by_index(img, s), gt_by_image[img], config_);
    for (const auto& cm : mr.categories) {
      const auto cit = table.index.find(cm.category_id);
      if (cit == table.index.end()) continue;
      auto& cell = cells_[k * n_cats + cit->second];
      cell.reserve(cm.scores.size());
      for (std::size_t d = 0; d < cm.scores.size(); ++d) {
        cell.push_back(CellEntry{cm.scores[d], cm.det_ids[d], cm.tp_bits[d], cm.ignore_bits[d]});
      }
    }
  });

  current_shift_.assign(n_images, 0);
  rebuild_merged();
}

int EvalCache::image_index_of(std::int64_t image_id) const {
  const auto it = std::lower_bound(image_ids_.begin(), image_ids_.end(), image_id);
  if (it == image_ids_.end() || *it != image_id) {
    throw InputError("unknown image_id " + std::to_string(image_id));
  }
  return static_cast<int>(it - image_ids_.begin());
}

const std::vector<EvalCache::CellEntry>& EvalCache::cell_entries(int image_index, int shift_index,
                                                                 int category_index) const {
  const std::size_t n_shifts = static_cast<std::size_t>(grid_.size());
  const std::size_t n_cats = category_ids_.size();
  return cells_[(static_cast<std::size_t>(image_index) * n_shifts + shift_index) * n_cats +
                category_index];
}

void EvalCache::rebuild_merged() {
  const std::size_t n_cats = category_ids_.size();
  merged_.assign(n_cats, {});
  for (std::size_t c = 0; c < n_cats; ++c) {
    auto& stream = merged_[c];
    for (std::size_t i = 0; i < image_ids_.size(); ++i) {
      for (const auto& e : cell_entries(static_cast<int>(i), current_shift_[i],
                                        static_cast<int>(c))) {
        stream.push_back(StreamEntry{e.score, e.det_id, static_cast<std::uint32_t>(i), e.tp_bits,
                                     e.ignore_bits});
      }
    }
    std::sort(stream.begin(), stream.end(), stream_less);
  }
}

ShiftAssignment EvalCache::assignment() const {
  ShiftAssignment a;
  for (std::size_t i = 0; i < image_ids_.size(); ++i) {
    a[image_ids_[i]] = grid_.at(current_shift_[i]);
  }
  return a;
}

Shift EvalCache::current_shift(std::int64_t image_id) const {
  return grid_.at(current_shift_[image_index_of(image_id)]);
}

void EvalCache::reset_assignment() {
  std::fill(current_shift_.begin(), current_shift_.end(), 0);
  rebuild_merged();
}

void EvalCache::set_assignment(const ShiftAssignment& assignment) {
  std::vector<int> shifts(image_ids_.size());
  for (std::size_t i = 0; i < image_ids_.size(); ++i) {
    const auto it = assignment.find(image_ids_[i]);
    if (it == assignment.end()) {
      throw InputError("incomplete selection: no shift for image_id " +
                       std::to_string(image_ids_[i]));
    }
    shifts[i] = grid_.index_of(it->second);
  }
  current_shift_ = std::move(shifts);
  rebuild_merged();
}

ApResult EvalCache::current_ap() const {
  return accumulate_streams(merged_, category_ids_, gt_counts_, config_);
}

double EvalCache::current_objective(Objective objective) const {
  thread_local std::vector<double> rc, pr;
  return accumulate_streams_objective(merged_, gt_counts_, config_, objective, rc, pr);
}

void EvalCache::merged_with_swap(int image_index, int shift_index, int category_index,
                                 std::vector<StreamEntry>* out) const {
  const auto& cur = merged_[category_index];
  const auto& cell = cell_entries(image_index, shift_index, category_index);
  const auto img = static_cast<std::uint32_t>(image_index);
  out->clear();
  out->reserve(cur.size() + cell.size());
  std::size_t j = 0;
  auto emit_cell_before = [&](const StreamEntry* upto) {
    while (j < cell.size()) {
      const StreamEntry cand{cell[j].score, cell[j].det_id, img, cell[j].tp_bits,
                             cell[j].ignore_bits};
      if (upto != nullptr && !stream_less(cand, *upto)) break;
      out->push_back(cand);
      ++j;
    }
  };
  for (const auto& e : cur) {
    if (e.image_index == img) continue;  // the replaced cell's entries
    emit_cell_before(&e);
    out->push_back(e);
  }
  emit_cell_before(nullptr);
}

ApResult EvalCache::swap_and_eval(std::int64_t image_id, Shift candidate) const {
  const int img = image_index_of(image_id);
  const int s = grid_.index_of(candidate);
  std::vector<std::vector<StreamEntry>> streams(category_ids_.size());
  for (std::size_t c = 0; c < category_ids_.size(); ++c) {
    merged_with_swap(img, s, static_cast<int>(c), &streams[c]);
  }
  return accumulate_streams(streams, category_ids_, gt_counts_, config_);
}

double EvalCache::swap_objective(std::int64_t image_id, Shift candidate,
                                 Objective objective) const {
  const int img = image_index_of(image_id);
  const int s = grid_.index_of(candidate);
  thread_local std::vector<std::vector<StreamEntry>> streams;
  thread_local std::vector<double> rc, pr;
  streams.resize(category_ids_.size());
  for (std::size_t c = 0; c < category_ids_.size(); ++c) {
    merged_with_swap(img, s, static_cast<int>(c), &streams[c]);
  }
  return accumulate_streams_objective(streams, gt_counts_, config_, objective, rc, pr);
}

void EvalCache::commit_swap(std::int64_t image_id, Shift new_shift) {
  const int img = image_index_of(image_id);
  const int s = grid_.index_of(new_shift);
  if (current_shift_[img] == s) return;
  for (std::size_t c = 0; c < category_ids_.size(); ++c) {
    std::vector<StreamEntry> next;
    merged_with_swap(img, s, static_cast<int>(c), &next);
    merged_[c] = std::move(next);
  }
  current_shift_[img] = s;
}

ApResult EvalCache::eval_assignment(const std::vector<int>& shift_index_per_image) const {
  if (shift_index_per_image.size() != image_ids_.size()) {
    throw std::invalid_argument("eval_assignment: wrong assignment length");
  }
  std::vector<std::vector<StreamEntry>> streams(category_ids_.size());
  for (std::size_t c = 0; c < category_ids_.size(); ++c) {
    for (std::size_t i = 0; i < image_ids_.size(); ++i) {
      for (const auto& e :
           cell_entries(static_cast<int>(i), shift_index_per_image[i], static_cast<int>(c))) {
        streams[c].push_back(StreamEntry{e.score, e.det_id, static_cast<std::uint32_t>(i),
                                         e.tp_bits, e.ignore_bits});
      }
    }
    std::sort(streams[c].begin(), streams[c].end(), stream_less);
  }
  return accumulate_streams(streams, category_ids_, gt_counts_, config_);
}

double EvalCache::eval_assignment_objective(const std::vector<int>& shift_index_per_image,
                                            Objective objective) const {
  if (shift_index_per_image.size() != image_ids_.size()) {
    throw std::invalid_argument("eval_assignment: wrong assignment length");
  }
  thread_local std::vector<std::vector<StreamEntry>> streams;
  thread_local std::vector<double> rc, pr;
  streams.resize(category_ids_.size());
  for (std::size_t c = 0; c < category_ids_.size(); ++c) {
    streams[c].clear();
    for (std::size_t i = 0; i < image_ids_.size(); ++i) {
      for (const auto& e :
           cell_entries(static_cast<int>(i), shift_index_per_image[i], static_cast<int>(c))) {
        streams[c].push_back(StreamEntry{e.score, e.det_id, static_cast<std::uint32_t>(i),
                                         e.tp_bits, e.ignore_bits});
      }
    }
    std::sort(streams[c].begin(), streams[c].end(), stream_less);
  }
  return accumulate_streams_objective(streams, gt_counts_, config_, objective, rc, pr);
}

}  // namespace shifteval
