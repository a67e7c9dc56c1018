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

#ifndef SHIFTEVAL_SERIALIZE_HPP_
#define SHIFTEVAL_SERIALIZE_HPP_

#include <string>

#include "json.hpp"
#include "shifteval/bounds.hpp"
#include "shifteval/evaluator.hpp"
#include "shifteval/simulate.hpp"

namespace shifteval {

// All report serialization uses ordered_json with a fixed key order so a
// rerun with identical inputs emits identical bytes.

nlohmann::ordered_json to_json(const ApResult& result);
nlohmann::ordered_json to_json(const ShiftAssignment& assignment);
nlohmann::ordered_json to_json(const BoundsResult& result);
nlohmann::ordered_json to_json(const SimSummary& summary);
nlohmann::ordered_json to_json(const SimConfig& config);

ShiftAssignment assignment_from_json(const nlohmann::json& j);
ShiftAssignment load_assignment(const std::string& path);
void write_assignment(const ShiftAssignment& assignment, const std::string& path);

/// Applies the fields present in `j` on top of `base`.
SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base);

}  // namespace shifteval

#endif  // SHIFTEVAL_SERIALIZE_HPP_
