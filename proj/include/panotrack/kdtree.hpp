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

#ifndef PANOTRACK_KDTREE_HPP_
#define PANOTRACK_KDTREE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "panotrack/geometry.hpp"

namespace panotrack {

// Static 3D k-d tree over a subset of a point array. Stores indices into the
// caller's array, which must outlive the tree.
class KdTree {
 public:
  KdTree(std::span<const Point3> points, std::vector<std::size_t> subset);

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }

  // Index (into the original array) of the closest point; ties resolve to
  // the lower index. std::nullopt on an empty tree.
  std::optional<std::size_t> nearest(const Point3& query) const;

 private:
  struct Node {
    std::size_t point;
    int axis;
  };

  void build(std::size_t lo, std::size_t hi, int depth);
  void search(std::size_t lo, std::size_t hi, const Point3& q,
              std::size_t& best, double& best_d2) const;

  std::span<const Point3> points_;
  std::vector<Node> nodes_;  // implicit tree: median of [lo, hi) at mid
};

}  // namespace panotrack

#endif  // PANOTRACK_KDTREE_HPP_
