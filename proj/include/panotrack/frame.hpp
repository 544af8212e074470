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

#ifndef PANOTRACK_FRAME_HPP_
#define PANOTRACK_FRAME_HPP_

#include <cstdint>
#include <vector>

#include "panotrack/geometry.hpp"

namespace panotrack {

using InstanceId = std::uint32_t;

// Per-point panoptic labels for one scan.
struct PanopticLabels {
  std::vector<ClassId> semantic;
  std::vector<InstanceId> instance;

  std::size_t size() const { return semantic.size(); }
  friend bool operator==(const PanopticLabels&,
                         const PanopticLabels&) = default;
};

// One scan with the network's per-point panoptic output. Stuff points carry
// instance 0.
struct FramePanoptic {
  std::vector<Point3> points;
  std::vector<float> remission;
  std::vector<ClassId> semantic;
  std::vector<InstanceId> instance;
  std::vector<float> confidence;

  std::size_t size() const { return points.size(); }
  // Throws FormatError if the per-point arrays differ in length.
  void validate() const;
};

}  // namespace panotrack

#endif  // PANOTRACK_FRAME_HPP_
