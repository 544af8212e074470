/* Copyright 2026 The panotrack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "panotrack/semantic.hpp"

#include <string>

#include "panotrack/errors.hpp"

namespace panotrack {

LearningClass to_learning(ClassId raw_id) {
  // semantic-kitti.yaml learning_map
  switch (raw_id) {
    case 10: return 1;   // car
    case 11: return 2;   // bicycle
    case 13: return 5;   // bus -> other-vehicle
    case 15: return 3;   // motorcycle
    case 16: return 5;   // on-rails -> other-vehicle
    case 18: return 4;   // truck
    case 20: return 5;   // other-vehicle
    case 30: return 6;   // person
    case 31: return 7;   // bicyclist
    case 32: return 8;   // motorcyclist
    case 40: return 9;   // road
    case 44: return 10;  // parking
    case 48: return 11;  // sidewalk
    case 49: return 12;  // other-ground
    case 50: return 13;  // building
    case 51: return 14;  // fence
    case 60: return 9;   // lane-marking -> road
    case 70: return 15;  // vegetation
    case 71: return 16;  // trunk
    case 72: return 17;  // terrain
    case 80: return 18;  // pole
    case 81: return 19;  // traffic-sign
    case 252: return 1;  // moving-car
    case 253: return 7;  // moving-bicyclist
    case 254: return 6;  // moving-person
    case 255: return 8;  // moving-motorcyclist
    case 256: return 5;  // moving-on-rails
    case 257: return 5;  // moving-bus
    case 258: return 4;  // moving-truck
    case 259: return 5;  // moving-other-vehicle
    default: return 0;   // unlabeled, outlier, other-structure, other-object
  }
}

bool is_things_learning(LearningClass c) { return c >= 1 && c <= 8; }

bool is_things(ClassId raw_id) { return is_things_learning(to_learning(raw_id)); }

std::string_view learning_class_name(LearningClass c) {
  static constexpr std::string_view kNames[kNumLearningClasses] = {
      "unlabeled", "car",          "bicycle",    "motorcycle", "truck",
      "other-vehicle", "person",   "bicyclist",  "motorcyclist", "road",
      "parking",   "sidewalk",     "other-ground", "building", "fence",
      "vegetation", "trunk",       "terrain",    "pole",       "traffic-sign"};
  if (c < 0 || c >= kNumLearningClasses) return "invalid";
  return kNames[c];
}

std::optional<ClassGroup> group_of(ClassId raw_id) {
  switch (to_learning(raw_id)) {
    case 1:
    case 4:
    case 5:
      return ClassGroup::kVehicles;
    case 2:
    case 3:
    case 7:
    case 8:
      return ClassGroup::kBikes;
    case 6:
      return ClassGroup::kPedestrian;
    default:
      return std::nullopt;
  }
}

std::string_view group_name(ClassGroup g) {
  switch (g) {
    case ClassGroup::kVehicles: return "vehicles";
    case ClassGroup::kBikes: return "bikes";
    case ClassGroup::kPedestrian: return "pedestrian";
  }
  return "unknown";
}

ClassGroup parse_group(std::string_view name) {
  for (ClassGroup g : kAllGroups) {
    if (group_name(g) == name) return g;
  }
  throw ConfigError("unknown class group '" + std::string(name) +
                    "' (expected vehicles, bikes or pedestrian)");
}

}  // namespace panotrack
