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

// Synthetic mini-datasets. Objects are boxes moving at constant velocity and
// rendered as uniform random points; the ground truth is exact and the
// prediction copy is corrupted by the noise model.
//
// Scenario files are JSON:
//
//   {
//     "frames": 30, "seed": 1, "sequence": "00",
//     "ego_velocity": [0, 0, 0],
//     "stuff": {"points": 300, "class": 40, "extent": [80, 80]},
//     "objects": [
//       {"id": 1, "class": "car", "birth": 0, "death": 29,
//        "center": [0, 0, 0], "size": [4, 2, 1.5],
//        "velocity": [1, 0, 0], "points": 120}
//     ],
//     "noise": {"dropout": 0.0, "score": [0.9, 1.0], "class_flip": 0.0,
//               "jitter": 0.0,
//               "occlusions": [{"object": 1, "from": 8, "to": 12}]}
//   }
//
// "class" is a raw label id or one of car, bicycle, motorcycle, truck,
// other-vehicle, person, bicyclist, motorcyclist. "points" is a count or a
// [first, last] pair ramped linearly over the object's lifetime. "death"
// defaults to the last frame. Only "frames" and "objects" are required.

#ifndef PANOTRACK_SYNTH_HPP_
#define PANOTRACK_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "panotrack/frame.hpp"
#include "panotrack/geometry.hpp"

namespace panotrack {

struct SynthObject {
  InstanceId id = 1;
  ClassId class_id = 10;
  int birth = 0;
  int death = -1;  // inclusive; -1 means the last frame
  std::array<double, 3> center{0, 0, 0};  // at the birth frame, world frame
  std::array<double, 3> size{4, 2, 1.5};
  std::array<double, 3> velocity{0, 0, 0};  // m per frame
  int points_first = 100;
  int points_last = 100;
};

struct Occlusion {
  InstanceId object = 0;
  int from = 0;  // inclusive
  int to = 0;    // inclusive
};

struct NoiseSpec {
  double dropout = 0.0;     // per object-frame detection deletion
  double score_min = 1.0;   // per-instance score ~ U[score_min, score_max]
  double score_max = 1.0;
  double class_flip = 0.0;  // per object-frame, to another class of its group
  double jitter = 0.0;      // sigma of the predicted instance mask offset, m
  std::vector<Occlusion> occlusions;
};

struct Scenario {
  int frames = 0;
  std::uint64_t seed = 0;
  std::string sequence = "00";
  std::array<double, 3> ego_velocity{0, 0, 0};
  int stuff_points = 200;
  ClassId stuff_class = 40;
  double stuff_extent_x = 80.0;
  double stuff_extent_y = 80.0;
  std::vector<SynthObject> objects;
  NoiseSpec noise;

  // Throws ConfigError on duplicate or out-of-range ids, empty lifetimes,
  // non-positive sizes, unknown classes and bad probabilities.
  void validate() const;
};

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// Raw label id for a class name or decimal id string; ConfigError otherwise.
ClassId parse_synth_class(std::string_view name);

// One generated scan in the ego frame.
struct SynthFrame {
  std::vector<Point3> points;
  std::vector<float> remission;
  PanopticLabels gt;
  PanopticLabels pred;
  std::vector<float> confidence;
};

struct SynthSequence {
  std::vector<SynthFrame> frames;
  std::vector<Point3> ego_positions;  // world translation per frame
};

// Pure function of the scenario.
SynthSequence generate(const Scenario& scenario);

// Writes the dataset under `root/sequences/<sequence>`: velodyne, labels,
// predictions, confidences, poses.txt and an identity calib.txt.
void write_dataset(const Scenario& scenario, const SynthSequence& seq,
                   const std::filesystem::path& root);

}  // namespace panotrack

#endif  // PANOTRACK_SYNTH_HPP_
