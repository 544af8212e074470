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

#ifndef PANOTRACK_GEOMETRY_HPP_
#define PANOTRACK_GEOMETRY_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace panotrack {

// Raw SemanticKITTI semantic label (e.g. 10 = car, 40 = road).
using ClassId = std::uint32_t;

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Axis-aligned 3D box. `theta` is carried through the filter state but is
// always zero for boxes built from point-wise labels; the similarity metrics
// below ignore it.
struct Box3D {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double theta = 0.0;
  double l = 1.0;  // extent along x
  double w = 1.0;  // extent along y
  double h = 1.0;  // extent along z
  double score = 1.0;
  ClassId class_id = 0;

  double volume() const { return l * w * h; }
  Point3 center() const { return {cx, cy, cz}; }

  friend bool operator==(const Box3D&, const Box3D&) = default;
};

// Throws InvalidInputError unless l, w, h > 0 and finite.
void validate_box(const Box3D& box);

// Volume IoU of two axis-aligned boxes, in [0, 1].
double iou3d(const Box3D& a, const Box3D& b);

// Distance-IoU: IoU minus squared center distance over the squared diagonal
// of the smallest enclosing box. Range (-1, 1].
double diou3d(const Box3D& a, const Box3D& b);

// Generalized IoU: IoU minus the fraction of the enclosing box not covered by
// the union. Range (-1, 1].
double giou3d(const Box3D& a, const Box3D& b);

enum class SimilarityMetric { kDiou, kGiou };

double similarity(SimilarityMetric metric, const Box3D& a, const Box3D& b);

// Indices of points inside the closed box (faces included).
std::vector<std::size_t> points_in_box(std::span<const Point3> points,
                                       const Box3D& box);

bool contains(const Box3D& box, const Point3& p);

}  // namespace panotrack

#endif  // PANOTRACK_GEOMETRY_HPP_
