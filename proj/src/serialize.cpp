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

#include "shifteval/serialize.hpp"

#include <fstream>

namespace shifteval {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const ApResult& result) {
  ordered_json j;
  j["ap"] = result.ap;
  j["ap50"] = result.ap50;
  ordered_json cats = ordered_json::array();
  for (const auto& c : result.per_category) {
    ordered_json rec;
    rec["category_id"] = c.category_id;
    rec["ap"] = c.ap;
    rec["ap50"] = c.ap50;
    cats.push_back(std::move(rec));
  }
  j["per_category"] = std::move(cats);
  ordered_json thrs = ordered_json::array();
  for (const auto& t : result.per_threshold) {
    ordered_json rec;
    rec["iou_threshold"] = t.iou_threshold;
    rec["ap"] = t.ap;
    thrs.push_back(std::move(rec));
  }
  j["per_threshold"] = std::move(thrs);
  return j;
}

ordered_json to_json(const ShiftAssignment& assignment) {
  ordered_json arr = ordered_json::array();
  for (const auto& [image_id, shift] : assignment) {
    ordered_json rec;
    rec["image_id"] = image_id;
    rec["shift"] = {shift.dx, shift.dy};
    arr.push_back(std::move(rec));
  }
  return arr;
}

ordered_json to_json(const BoundsResult& result) {
  ordered_json j;
  j["baseline"] = to_json(result.baseline);
  j["ap_best"] = to_json(result.ap_best);
  j["ap_worst"] = to_json(result.ap_worst);
  j["delta_ap"] = result.delta_ap;
  j["delta_ap50"] = result.delta_ap50;
  j["eval_count_best"] = result.eval_count_best;
  j["eval_count_worst"] = result.eval_count_worst;
  j["iterations_best"] = result.iterations_best;
  j["iterations_worst"] = result.iterations_worst;
  j["objective_trace_best"] = result.trace_best;
  j["objective_trace_worst"] = result.trace_worst;
  j["assignment_best"] = to_json(result.assignment_best);
  j["assignment_worst"] = to_json(result.assignment_worst);
  return j;
}

ordered_json to_json(const SimSummary& summary) {
  ordered_json j;
  j["mean_drop_prob"] = summary.mean_drop_prob;
  j["expected_objects"] = summary.expected_objects;
  j["sd_objects"] = summary.sd_objects;
  j["expected_true_detections"] = summary.expected_true_detections;
  j["sd_true_detections"] = summary.sd_true_detections;
  j["expected_false_positives"] = summary.expected_false_positives;
  j["sd_false_positives"] = summary.sd_false_positives;
  return j;
}

ordered_json to_json(const SimConfig& config) {
  ordered_json j;
  j["n_images"] = config.n_images;
  j["image_size"] = config.image_size;
  j["n_categories"] = config.n_categories;
  j["min_objects"] = config.min_objects;
  j["max_objects"] = config.max_objects;
  j["max_shift"] = config.max_shift;
  j["score_base"] = config.score_base;
  j["box_jitter_sigma"] = config.box_jitter_sigma;
  j["score_jitter_sigma"] = config.score_jitter_sigma;
  j["drop_model"] = to_string(config.drop_model);
  j["drop_rate"] = config.drop_rate;
  j["fp_rate"] = config.fp_rate;
  j["seed"] = config.seed;
  return j;
}

ShiftAssignment assignment_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("assignment: expected a JSON array");
  ShiftAssignment assignment;
  for (const auto& rec : j) {
    const std::int64_t image_id = rec.at("image_id").get<std::int64_t>();
    const auto& s = rec.at("shift");
    if (!s.is_array() || s.size() != 2) {
      throw InputError("assignment: shift must be [dx, dy]");
    }
    if (!assignment.emplace(image_id, Shift{s[0].get<int>(), s[1].get<int>()}).second) {
      throw InputError("assignment: duplicate image_id " + std::to_string(image_id));
    }
  }
  return assignment;
}

ShiftAssignment load_assignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("parse error in " + path + ": " + e.what());
  }
  return assignment_from_json(j);
}

void write_assignment(const ShiftAssignment& assignment, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << to_json(assignment).dump(2) << "\n";
}

SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base) {
  if (!j.is_object()) throw InputError("simulator config: expected a JSON object");
  base.n_images = j.value("n_images", base.n_images);
  base.image_size = j.value("image_size", base.image_size);
  base.n_categories = j.value("n_categories", base.n_categories);
  base.min_objects = j.value("min_objects", base.min_objects);
  base.max_objects = j.value("max_objects", base.max_objects);
  base.max_shift = j.value("max_shift", base.max_shift);
  base.score_base = j.value("score_base", base.score_base);
  base.box_jitter_sigma = j.value("box_jitter_sigma", base.box_jitter_sigma);
  base.score_jitter_sigma = j.value("score_jitter_sigma", base.score_jitter_sigma);
  if (j.contains("drop_model")) {
    base.drop_model = drop_model_from_string(j["drop_model"].get<std::string>());
  }
  base.drop_rate = j.value("drop_rate", base.drop_rate);
  base.fp_rate = j.value("fp_rate", base.fp_rate);
  base.seed = j.value("seed", base.seed);
  return base;
}

}  // namespace shifteval
