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

#include "panotrack/pointlabel.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

bool is_instance_point(const FramePanoptic& f, std::size_t i) {
  return is_things(f.semantic[i]) && f.instance[i] != 0;
}

std::vector<std::size_t> things_with_instance(const FramePanoptic& f) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (is_instance_point(f, i)) idx.push_back(i);
  }
  return idx;
}

}  // namespace

void FramePanoptic::validate() const {
  const std::size_t n = points.size();
  if (semantic.size() != n || instance.size() != n || confidence.size() != n ||
      (!remission.empty() && remission.size() != n)) {
    throw FormatError("frame arrays differ in length: " + std::to_string(n) +
                      " points, " + std::to_string(semantic.size()) +
                      " labels, " + std::to_string(confidence.size()) +
                      " confidences");
  }
}

InstanceId IdMemory::take() {
  if (next_ > kMaxInstanceId) {
    throw FormatError("instance id space exhausted: more than " +
                      std::to_string(kMaxInstanceId) +
                      " instances in one sequence");
  }
  return next_++;
}

InstanceId IdMemory::lookup_or_assign(ClassGroup group, TrackId track_id) {
  const auto key = std::make_pair(static_cast<int>(group), track_id);
  if (const auto it = ids_.find(key); it != ids_.end()) return it->second;
  const InstanceId id = take();
  ids_.emplace(key, id);
  return id;
}

std::optional<InstanceId> IdMemory::find(ClassGroup group,
                                         TrackId track_id) const {
  const auto it = ids_.find(std::make_pair(static_cast<int>(group), track_id));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

InstanceId IdMemory::allocate_fresh() { return take(); }

std::vector<InstanceId> IdMemory::tracked_ids() const {
  std::vector<InstanceId> out;
  out.reserve(ids_.size());
  for (const auto& [key, id] : ids_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

FrameIndex::FrameIndex(const FramePanoptic& frame)
    : frame_(frame),
      things_(things_with_instance(frame)),
      tree_(frame.points, things_) {
  for (std::size_t i : things_) instances_[frame.instance[i]].push_back(i);
}

std::optional<InstanceId> FrameIndex::nearest_instance(const Point3& p) const {
  const auto nearest = tree_.nearest(p);
  if (!nearest) return std::nullopt;
  return frame_.instance[*nearest];
}

const std::vector<std::size_t>& FrameIndex::instance_points(
    InstanceId id) const {
  static const std::vector<std::size_t> kEmpty;
  const auto it = instances_.find(id);
  return it == instances_.end() ? kEmpty : it->second;
}

std::vector<std::size_t> associate_box_points(const Box3D& box,
                                              const FrameIndex& index) {
  const FramePanoptic& f = index.frame();
  const auto nearest = index.nearest_instance(box.center());
  if (!nearest) return {};

  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (is_things(f.semantic[i]) && contains(box, f.points[i])) {
      inner.push_back(i);
    }
  }
  const std::vector<std::size_t>& owned = index.instance_points(*nearest);
  std::vector<std::size_t> result;
  result.reserve(inner.size() + owned.size());
  std::set_union(inner.begin(), inner.end(), owned.begin(), owned.end(),
                 std::back_inserter(result));
  return result;
}

std::vector<std::size_t> associate_box_points(const Box3D& box,
                                              const FramePanoptic& frame) {
  return associate_box_points(box, FrameIndex(frame));
}

std::vector<std::vector<std::size_t>> resolve_overlaps(
    std::vector<std::vector<std::size_t>> sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      std::vector<std::size_t> shared;
      std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(),
                            sets[j].end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      // Overlaps of three points or fewer follow the same rule: the output
      // holds one instance per point.
      const double ratio_i =
          static_cast<double>(shared.size()) / static_cast<double>(sets[i].size());
      const double ratio_j =
          static_cast<double>(shared.size()) / static_cast<double>(sets[j].size());
      std::vector<std::size_t>& loser = ratio_i >= ratio_j ? sets[j] : sets[i];
      std::vector<std::size_t> kept;
      kept.reserve(loser.size() - shared.size());
      std::set_difference(loser.begin(), loser.end(), shared.begin(),
                          shared.end(), std::back_inserter(kept));
      loser = std::move(kept);
    }
  }
  return sets;
}

PanopticLabels label_frame(const FramePanoptic& frame,
                           const std::vector<TrackedPoints>& tracked,
                           IdMemory& memory, std::size_t ignore_size) {
  const std::size_t n = frame.size();
  PanopticLabels out;
  out.semantic.assign(n, 0);
  out.instance.assign(n, 0);
  std::vector<char> claimed(n, 0);

  for (const TrackedPoints& t : tracked) {
    if (t.points.empty()) continue;
    const InstanceId id = memory.lookup_or_assign(t.group, t.track_id);
    for (std::size_t i : t.points) {
      out.semantic[i] = t.class_id;
      out.instance[i] = id;
      claimed[i] = 1;
    }
  }

  std::map<InstanceId, std::vector<std::size_t>> leftovers;
  for (std::size_t i = 0; i < n; ++i) {
    if (claimed[i]) continue;
    if (is_instance_point(frame, i)) {
      leftovers[frame.instance[i]].push_back(i);
    } else {
      out.semantic[i] = frame.semantic[i];
      out.instance[i] = 0;
    }
  }
  for (const auto& [network_id, points] : leftovers) {
    if (points.size() < ignore_size) continue;  // stays (0, 0)
    const InstanceId id = memory.allocate_fresh();
    for (std::size_t i : points) {
      out.semantic[i] = frame.semantic[i];
      out.instance[i] = id;
    }
  }
  return out;
}

}  // namespace panotrack
