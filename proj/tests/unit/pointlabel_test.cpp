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
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "panotrack/errors.hpp"
#include "test_support.hpp"

namespace panotrack {
namespace {

using testing_support::box;
using Indices = std::vector<std::size_t>;

void add_point(FramePanoptic& f, Point3 p, ClassId sem, InstanceId inst) {
  f.points.push_back(p);
  f.remission.push_back(0.0f);
  f.semantic.push_back(sem);
  f.instance.push_back(inst);
  f.confidence.push_back(1.0f);
}

Indices range(std::size_t lo, std::size_t hi) {
  Indices r(hi - lo);
  std::iota(r.begin(), r.end(), lo);
  return r;
}

// Twenty car points on the x axis: instance 1 at x = 0..5 and instance 2 at
// x = 6..19, one meter apart.
FramePanoptic line_scene() {
  FramePanoptic f;
  for (int x = 0; x < 20; ++x) add_point(f, {double(x), 0, 0}, raw::kCar, x < 6 ? 1 : 2);
  return f;
}

// Red box spans x in [-0.5, 9.5]: instance 1 plus four points of instance 2.
Box3D red_box() { return box(4.5, 0, 0, 10, 1, 1); }
// Blue box spans x in [5.5, 19.5]: all of instance 2.
Box3D blue_box() { return box(12.5, 0, 0, 14, 1, 1); }

TEST(AssociateBoxPoints, BoxCoveringOneIsolatedInstance) {
  FramePanoptic f;
  for (int i = 0; i < 5; ++i) add_point(f, {0.1 * i, 0, 0}, raw::kCar, 3);
  for (int i = 0; i < 5; ++i) add_point(f, {20 + 0.1 * i, 0, 0}, raw::kCar, 4);
  EXPECT_EQ(associate_box_points(box(0.2, 0, 0, 1, 1, 1), f), range(0, 5));
}

TEST(AssociateBoxPoints, StrayPointsOfAnotherInstanceAreIncluded) {
  // Covers instance 1 and three stray points (x = 6, 7, 8) of instance 2.
  const FramePanoptic f = line_scene();
  EXPECT_EQ(associate_box_points(box(4.0, 0, 0, 9, 1, 1), f), range(0, 9));
}

TEST(AssociateBoxPoints, NearestInstanceWholeEvenOutsideBox) {
  const FramePanoptic f = line_scene();
  // Only reaches x in [-0.5, 2.5] but instance 1 extends to x = 5.
  EXPECT_EQ(associate_box_points(box(1.0, 0, 0, 3, 1, 1), f), range(0, 6));
}

TEST(AssociateBoxPoints, StuffOnlyBoxTakesNearestInstance) {
  FramePanoptic f;
  for (int i = 0; i < 10; ++i) add_point(f, {0.1 * i - 0.5, 0, -0.5}, raw::kRoad, 0);
  for (int i = 0; i < 4; ++i) add_point(f, {2.0, 0.1 * i, 0}, raw::kPerson, 9);
  for (int i = 0; i < 4; ++i) add_point(f, {9.0, 0.1 * i, 0}, raw::kPerson, 8);
  EXPECT_EQ(associate_box_points(box(0, 0, 0, 1.5, 1.5, 1.5), f), range(10, 14));
}

TEST(AssociateBoxPoints, StuffPointsInsideBoxAreNeverClaimed) {
  FramePanoptic f;
  add_point(f, {0, 0, 0}, raw::kRoad, 0);
  add_point(f, {0.1, 0, 0}, raw::kCar, 2);
  add_point(f, {0.2, 0, 0}, raw::kCar, 0);  // Things without an instance
  EXPECT_EQ(associate_box_points(box(0, 0, 0, 2, 2, 2), f), (Indices{1, 2}));
}

TEST(AssociateBoxPoints, FrameWithoutThingsGivesEmptySet) {
  FramePanoptic f;
  for (int i = 0; i < 5; ++i) add_point(f, {0.1 * i, 0, 0}, raw::kBuilding, 0);
  EXPECT_TRUE(associate_box_points(box(0, 0, 0, 5, 5, 5), f).empty());
}

TEST(ResolveOverlaps, LargerShareOfOwnPointsWins) {
  // Nine shared points are 13.85 % of the red set and 8.82 % of the blue set.
  const Indices red = range(0, 65);
  const Indices blue = range(56, 158);
  ASSERT_EQ(blue.size(), 102u);
  const auto out = resolve_overlaps({red, blue});
  EXPECT_EQ(out[0], red);
  EXPECT_EQ(out[1], range(65, 158));
  // Order of the boxes does not matter.
  const auto swapped = resolve_overlaps({blue, red});
  EXPECT_EQ(swapped[0], range(65, 158));
  EXPECT_EQ(swapped[1], red);
}

TEST(ResolveOverlaps, DisjointSetsUnchanged) {
  const std::vector<Indices> in = {{0, 1, 2}, {3, 4}, {7}};
  EXPECT_EQ(resolve_overlaps(in), in);
}

TEST(ResolveOverlaps, SmallOverlapsAlsoGoToOneBox) {
  const auto out = resolve_overlaps({{0, 1, 2, 3}, {3, 4, 5, 6, 7, 8}});
  EXPECT_EQ(out[0], (Indices{0, 1, 2, 3}));
  EXPECT_EQ(out[1], (Indices{4, 5, 6, 7, 8}));
}

TEST(ResolveOverlaps, TieGoesToEarlierBox) {
  const auto out = resolve_overlaps({{0, 1, 2, 3, 4}, {2, 3, 4, 5, 6}});
  EXPECT_EQ(out[0], (Indices{0, 1, 2, 3, 4}));
  EXPECT_EQ(out[1], (Indices{5, 6}));
}

TEST(ResolveOverlaps, ThreeMutuallyOverlappingBoxesBecomeDisjoint) {
  const std::vector<Indices> in = {range(0, 12), range(8, 20), range(4, 16)};
  const auto out = resolve_overlaps(in);
  std::set<std::size_t> all;
  std::size_t total = 0;
  for (const Indices& s : out) {
    total += s.size();
    all.insert(s.begin(), s.end());
  }
  EXPECT_EQ(total, all.size());
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_TRUE(std::includes(in[k].begin(), in[k].end(), out[k].begin(), out[k].end()));
  }
}

TEST(ResolveOverlaps, RandomSetsAlwaysEndDisjoint) {
  std::mt19937_64 rng(81);
  std::uniform_int_distribution<std::size_t> lo(0, 60), len(1, 40);
  std::uniform_int_distribution<int> count(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Indices> in;
    for (int k = count(rng); k > 0; --k) {
      const std::size_t a = lo(rng);
      in.push_back(range(a, a + len(rng)));
    }
    const auto out = resolve_overlaps(in);
    std::set<std::size_t> all;
    std::size_t total = 0;
    for (const Indices& s : out) {
      EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
      total += s.size();
      all.insert(s.begin(), s.end());
    }
    EXPECT_EQ(total, all.size());
  }
}

TEST(Stage2, TwentyPointOverlapScene) {
  const FramePanoptic f = line_scene();
  const Indices red = associate_box_points(red_box(), f);
  const Indices blue = associate_box_points(blue_box(), f);
  EXPECT_EQ(red, range(0, 10));   // 4 shared of 10: 40 %
  EXPECT_EQ(blue, range(6, 20));  // 4 shared of 14: 28.6 %
  const auto resolved = resolve_overlaps({red, blue});
  EXPECT_EQ(resolved[0], range(0, 10));
  EXPECT_EQ(resolved[1], range(10, 20));

  IdMemory memory;
  const PanopticLabels out = label_frame(
      f,
      {{ClassGroup::kVehicles, 1, raw::kCar, resolved[0]},
       {ClassGroup::kVehicles, 2, raw::kTruck, resolved[1]}},
      memory);
  ASSERT_EQ(out.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(out.instance[i], i < 10 ? 1u : 2u) << i;
    EXPECT_EQ(out.semantic[i], i < 10 ? raw::kCar : raw::kTruck) << i;
  }
}

TEST(LabelFrame, UntrackedBlobsBySize) {
  FramePanoptic f;
  for (int i = 0; i < 24; ++i) add_point(f, {0.01 * i, 0, 0}, raw::kPerson, 5);
  for (int i = 0; i < 25; ++i) add_point(f, {10 + 0.01 * i, 0, 0}, raw::kBicycle, 6);
  for (int i = 0; i < 3; ++i) add_point(f, {30, 0, 0}, raw::kVegetation, 0);
  IdMemory memory;
  const PanopticLabels out = label_frame(f, {}, memory);
  for (int i = 0; i < 24; ++i) {
    EXPECT_EQ(out.semantic[i], 0u);
    EXPECT_EQ(out.instance[i], 0u);
  }
  for (int i = 24; i < 49; ++i) {
    EXPECT_EQ(out.semantic[i], raw::kBicycle);
    EXPECT_EQ(out.instance[i], 1u);
  }
  for (int i = 49; i < 52; ++i) {
    EXPECT_EQ(out.semantic[i], raw::kVegetation);
    EXPECT_EQ(out.instance[i], 0u);
  }
  EXPECT_EQ(memory.tracked_count(), 0u);
  EXPECT_EQ(memory.next_free(), 2u);
}

TEST(LabelFrame, IgnoreSizeIsConfigurable) {
  FramePanoptic f;
  for (int i = 0; i < 24; ++i) add_point(f, {0.01 * i, 0, 0}, raw::kPerson, 5);
  IdMemory memory;
  EXPECT_EQ(label_frame(f, {}, memory, 10).instance[0], 1u);
}

TEST(LabelFrame, TrackIdsStableAcrossFrames) {
  const FramePanoptic f = line_scene();
  IdMemory memory;
  const std::vector<TrackedPoints> tracked = {
      {ClassGroup::kBikes, 7, raw::kBicycle, range(0, 6)}};
  const InstanceId first = label_frame(f, tracked, memory, 10).instance[0];
  // Untracked instance 2 takes a fresh id in between.
  const PanopticLabels later = label_frame(f, tracked, memory, 10);
  EXPECT_EQ(later.instance[0], first);
  EXPECT_NE(later.instance[10], first);
  EXPECT_EQ(memory.find(ClassGroup::kBikes, 7), first);
}

TEST(LabelFrame, SameTrackIdInDifferentGroupsGetsDistinctIds) {
  const FramePanoptic f = line_scene();
  IdMemory memory;
  const PanopticLabels out = label_frame(
      f,
      {{ClassGroup::kVehicles, 1, raw::kCar, range(0, 6)},
       {ClassGroup::kPedestrian, 1, raw::kPerson, range(6, 20)}},
      memory);
  EXPECT_NE(out.instance[0], out.instance[6]);
  EXPECT_EQ(memory.tracked_ids(), (std::vector<InstanceId>{1, 2}));
}

TEST(LabelFrame, EmptyTrackClaimsNothingAndTakesNoId) {
  const FramePanoptic f = line_scene();
  IdMemory memory;
  label_frame(f, {{ClassGroup::kVehicles, 3, raw::kCar, {}}}, memory, 100);
  EXPECT_FALSE(memory.find(ClassGroup::kVehicles, 3).has_value());
}

TEST(LabelFrame, IdempotentGivenSameMemoryState) {
  const FramePanoptic f = line_scene();
  const std::vector<TrackedPoints> tracked = {
      {ClassGroup::kVehicles, 4, raw::kCar, range(0, 3)}};
  IdMemory base;
  base.lookup_or_assign(ClassGroup::kBikes, 1);
  IdMemory a = base, b = base;
  EXPECT_EQ(label_frame(f, tracked, a, 5), label_frame(f, tracked, b, 5));
  EXPECT_EQ(a, b);
}

TEST(IdMemory, TrackedAndFreshIdsShareOneCounter) {
  IdMemory m;
  EXPECT_EQ(m.lookup_or_assign(ClassGroup::kVehicles, 5), 1u);
  EXPECT_EQ(m.allocate_fresh(), 2u);
  EXPECT_EQ(m.lookup_or_assign(ClassGroup::kBikes, 5), 3u);
  EXPECT_EQ(m.lookup_or_assign(ClassGroup::kVehicles, 5), 1u);
  EXPECT_EQ(m.tracked_count(), 2u);
  EXPECT_EQ(m.tracked_ids(), (std::vector<InstanceId>{1, 3}));
  EXPECT_FALSE(m.find(ClassGroup::kPedestrian, 5).has_value());
}

TEST(IdMemory, ExhaustionFailsLoudly) {
  IdMemory m;
  for (InstanceId i = 1; i <= kMaxInstanceId; ++i) m.allocate_fresh();
  EXPECT_THROW(m.allocate_fresh(), FormatError);
  EXPECT_THROW(m.lookup_or_assign(ClassGroup::kVehicles, 1), FormatError);
}

}  // namespace
}  // namespace panotrack
