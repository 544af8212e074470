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

// Stage 2: turns tracked boxes into per-point panoptic labels with instance
// ids that are unique across classes and stable over time.

#ifndef PANOTRACK_POINTLABEL_HPP_
#define PANOTRACK_POINTLABEL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "panotrack/frame.hpp"
#include "panotrack/kdtree.hpp"
#include "panotrack/semantic.hpp"
#include "panotrack/tracklet.hpp"

namespace panotrack {

// Largest instance id the 16-bit label field can hold.
inline constexpr InstanceId kMaxInstanceId = 0xFFFF;

// Things instances smaller than this (in points) are erased.
inline constexpr std::size_t kDefaultIgnoreSize = 25;

// Lookup from (class group, per-group track id) to a sequence-unique
// instance id. Also hands out ids for untracked instances from the same
// counter so the two never collide.
class IdMemory {
 public:
  InstanceId lookup_or_assign(ClassGroup group, TrackId track_id);
  std::optional<InstanceId> find(ClassGroup group, TrackId track_id) const;
  InstanceId allocate_fresh();

  InstanceId next_free() const { return next_; }
  std::size_t tracked_count() const { return ids_.size(); }
  // Ids handed to tracks, ascending.
  std::vector<InstanceId> tracked_ids() const;

  friend bool operator==(const IdMemory&, const IdMemory&) = default;

 private:
  InstanceId take();

  std::map<std::pair<int, TrackId>, InstanceId> ids_;
  InstanceId next_ = 1;
};

// Per-frame lookup structures: a k-d tree over Things points that belong to
// a network instance, and the point list of every network instance.
class FrameIndex {
 public:
  explicit FrameIndex(const FramePanoptic& frame);

  const FramePanoptic& frame() const { return frame_; }
  std::optional<InstanceId> nearest_instance(const Point3& p) const;
  const std::vector<std::size_t>& instance_points(InstanceId id) const;

 private:
  const FramePanoptic& frame_;
  std::vector<std::size_t> things_;
  KdTree tree_;
  std::map<InstanceId, std::vector<std::size_t>> instances_;
};

// Things points inside the box, united with every Things point of the
// network instance nearest to the box center. Sorted, no duplicates. Empty
// when the frame has no Things instances.
std::vector<std::size_t> associate_box_points(const Box3D& box,
                                              const FrameIndex& index);
std::vector<std::size_t> associate_box_points(const Box3D& box,
                                              const FramePanoptic& frame);

// Makes per-box point sets pairwise disjoint. Pairs are visited in list
// order (i < j); the points two boxes share go to the box for which they
// make up the larger fraction of its points, the earlier box on a tie.
// Input sets must be sorted.
std::vector<std::vector<std::size_t>> resolve_overlaps(
    std::vector<std::vector<std::size_t>> assignments);

struct TrackedPoints {
  ClassGroup group;
  TrackId track_id;
  ClassId class_id;  // tracklet majority class
  std::vector<std::size_t> points;
};

// Final labels: tracked points get the tracklet's class and its IdMemory id;
// leftover network Things instances keep their class and get a fresh id if
// they have at least `ignore_size` points, else become (0, 0); everything
// else keeps the network class with instance 0.
PanopticLabels label_frame(const FramePanoptic& frame,
                           const std::vector<TrackedPoints>& tracked,
                           IdMemory& memory,
                           std::size_t ignore_size = kDefaultIgnoreSize);

}  // namespace panotrack

#endif  // PANOTRACK_POINTLABEL_HPP_
