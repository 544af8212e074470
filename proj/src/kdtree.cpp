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

#include "panotrack/kdtree.hpp"

#include <algorithm>
#include <limits>

namespace panotrack {
namespace {

double coord(const Point3& p, int axis) {
  return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

double dist2(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

KdTree::KdTree(std::span<const Point3> points, std::vector<std::size_t> subset)
    : points_(points) {
  nodes_.reserve(subset.size());
  for (std::size_t i : subset) nodes_.push_back({i, 0});
  build(0, nodes_.size(), 0);
}

void KdTree::build(std::size_t lo, std::size_t hi, int depth) {
  if (hi <= lo) return;
  const int axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(nodes_.begin() + lo, nodes_.begin() + mid,
                   nodes_.begin() + hi, [&](const Node& a, const Node& b) {
                     const double ca = coord(points_[a.point], axis);
                     const double cb = coord(points_[b.point], axis);
                     return ca < cb || (ca == cb && a.point < b.point);
                   });
  nodes_[mid].axis = axis;
  build(lo, mid, depth + 1);
  build(mid + 1, hi, depth + 1);
}

void KdTree::search(std::size_t lo, std::size_t hi, const Point3& q,
                    std::size_t& best, double& best_d2) const {
  if (hi <= lo) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const Node& node = nodes_[mid];
  const Point3& p = points_[node.point];

  const double d2 = dist2(p, q);
  if (d2 < best_d2 || (d2 == best_d2 && node.point < best)) {
    best_d2 = d2;
    best = node.point;
  }

  const double diff = coord(q, node.axis) - coord(p, node.axis);
  const bool left_first = diff <= 0;
  if (left_first) {
    search(lo, mid, q, best, best_d2);
    if (diff * diff <= best_d2) search(mid + 1, hi, q, best, best_d2);
  } else {
    search(mid + 1, hi, q, best, best_d2);
    if (diff * diff <= best_d2) search(lo, mid, q, best, best_d2);
  }
}

std::optional<std::size_t> KdTree::nearest(const Point3& query) const {
  if (nodes_.empty()) return std::nullopt;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  search(0, nodes_.size(), query, best, best_d2);
  return best;
}

}  // namespace panotrack
