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

#include "panotrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

struct Interval {
  double lo;
  double hi;
};

Interval x_span(const Box3D& b) { return {b.cx - b.l / 2, b.cx + b.l / 2}; }
Interval y_span(const Box3D& b) { return {b.cy - b.w / 2, b.cy + b.w / 2}; }
Interval z_span(const Box3D& b) { return {b.cz - b.h / 2, b.cz + b.h / 2}; }

double overlap(Interval a, Interval b) {
  return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

double length(Interval a) { return a.hi - a.lo; }

double hull(Interval a, Interval b) {
  return std::max(a.hi, b.hi) - std::min(a.lo, b.lo);
}

// Intersection volume, union volume, and the extents of the enclosing box.
struct PairGeometry {
  double inter;
  double uni;
  double ex, ey, ez;
};

PairGeometry pair_geometry(const Box3D& a, const Box3D& b) {
  validate_box(a);
  validate_box(b);
  PairGeometry g;
  g.inter = overlap(x_span(a), x_span(b)) * overlap(y_span(a), y_span(b)) *
            overlap(z_span(a), z_span(b));
  // Volumes from the same spans as the intersection so that iou(a, a) == 1
  // holds exactly.
  const double va = length(x_span(a)) * length(y_span(a)) * length(z_span(a));
  const double vb = length(x_span(b)) * length(y_span(b)) * length(z_span(b));
  g.uni = va + vb - g.inter;
  g.ex = hull(x_span(a), x_span(b));
  g.ey = hull(y_span(a), y_span(b));
  g.ez = hull(z_span(a), z_span(b));
  return g;
}

}  // namespace

void validate_box(const Box3D& box) {
  const bool ok = std::isfinite(box.cx) && std::isfinite(box.cy) &&
                  std::isfinite(box.cz) && std::isfinite(box.l) &&
                  std::isfinite(box.w) && std::isfinite(box.h) && box.l > 0 &&
                  box.w > 0 && box.h > 0;
  if (!ok) {
    std::ostringstream msg;
    msg << "invalid box: center (" << box.cx << ", " << box.cy << ", "
        << box.cz << ") dims (" << box.l << ", " << box.w << ", " << box.h
        << ")";
    throw InvalidInputError(msg.str());
  }
}

double iou3d(const Box3D& a, const Box3D& b) {
  const PairGeometry g = pair_geometry(a, b);
  return g.inter / g.uni;
}

double diou3d(const Box3D& a, const Box3D& b) {
  const PairGeometry g = pair_geometry(a, b);
  const double dx = a.cx - b.cx;
  const double dy = a.cy - b.cy;
  const double dz = a.cz - b.cz;
  const double rho2 = dx * dx + dy * dy + dz * dz;
  const double c2 = g.ex * g.ex + g.ey * g.ey + g.ez * g.ez;
  return g.inter / g.uni - rho2 / c2;
}

double giou3d(const Box3D& a, const Box3D& b) {
  const PairGeometry g = pair_geometry(a, b);
  const double enclosing = g.ex * g.ey * g.ez;
  // Nested boxes give enclosing == union; rounding must not push GIoU past IoU.
  const double gap = std::max(0.0, enclosing - g.uni);
  return g.inter / g.uni - gap / enclosing;
}

double similarity(SimilarityMetric metric, const Box3D& a, const Box3D& b) {
  return metric == SimilarityMetric::kGiou ? giou3d(a, b) : diou3d(a, b);
}

bool contains(const Box3D& box, const Point3& p) {
  return std::abs(p.x - box.cx) <= box.l / 2 &&
         std::abs(p.y - box.cy) <= box.w / 2 &&
         std::abs(p.z - box.cz) <= box.h / 2;
}

std::vector<std::size_t> points_in_box(std::span<const Point3> points,
                                       const Box3D& box) {
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (contains(box, points[i])) inside.push_back(i);
  }
  return inside;
}

}  // namespace panotrack
