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

// SemanticKITTI class taxonomy: raw label ids, the 19-class learning map used
// for evaluation, the Things/Stuff split, and the tracker's class groups.

#ifndef PANOTRACK_SEMANTIC_HPP_
#define PANOTRACK_SEMANTIC_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "panotrack/geometry.hpp"

namespace panotrack {

// Index into the 19 evaluation classes; 0 is "ignored".
using LearningClass = int;
inline constexpr int kNumLearningClasses = 20;

// Raw semantic ids of the things the synthetic generator emits.
namespace raw {
inline constexpr ClassId kUnlabeled = 0;
inline constexpr ClassId kCar = 10;
inline constexpr ClassId kBicycle = 11;
inline constexpr ClassId kMotorcycle = 15;
inline constexpr ClassId kTruck = 18;
inline constexpr ClassId kOtherVehicle = 20;
inline constexpr ClassId kPerson = 30;
inline constexpr ClassId kBicyclist = 31;
inline constexpr ClassId kMotorcyclist = 32;
inline constexpr ClassId kRoad = 40;
inline constexpr ClassId kBuilding = 50;
inline constexpr ClassId kVegetation = 70;
}  // namespace raw

enum class ClassGroup { kVehicles = 0, kBikes = 1, kPedestrian = 2 };
inline constexpr std::array<ClassGroup, 3> kAllGroups = {
    ClassGroup::kVehicles, ClassGroup::kBikes, ClassGroup::kPedestrian};

// Maps a raw label (including moving-* variants) to its learning class;
// unknown ids map to 0.
LearningClass to_learning(ClassId raw_id);

// Learning classes 1..8 are Things.
bool is_things_learning(LearningClass c);
bool is_things(ClassId raw_id);

std::string_view learning_class_name(LearningClass c);

// vehicles = {car, truck, other-vehicle}; bikes = {bicycle, motorcycle,
// bicyclist, motorcyclist}; pedestrian = {person}. Stuff has no group.
std::optional<ClassGroup> group_of(ClassId raw_id);

std::string_view group_name(ClassGroup g);
// Throws ConfigError for names other than vehicles/bikes/pedestrian.
ClassGroup parse_group(std::string_view name);

}  // namespace panotrack

#endif  // PANOTRACK_SEMANTIC_HPP_
