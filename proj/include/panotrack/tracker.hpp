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

// Stage 1: box tracker. Each frame, per class group:
//   predict -> active base block -> candidate base block (fed the active
//   block's leftovers) -> birth from unmatched high detections ->
//   lifecycle transitions -> emit active tracklets.

#ifndef PANOTRACK_TRACKER_HPP_
#define PANOTRACK_TRACKER_HPP_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "panotrack/association.hpp"
#include "panotrack/geometry.hpp"
#include "panotrack/motion.hpp"
#include "panotrack/semantic.hpp"
#include "panotrack/tracklet.hpp"

namespace panotrack {

struct GroupConfig {
  double det_split_threshold = 0.5;
  double high_match_threshold = 0.0;
  double low_match_threshold = 0.0;
  int min_hits = 1;
  int max_age = 1;
  int death_age = 2;
  KalmanParams kalman;
};

// Switches for the ablation variants. Defaults are the full tracker.
struct AblationToggles {
  bool use_kalman = true;
  SimilarityMetric matching_metric = SimilarityMetric::kDiou;
  bool use_candidate_state = true;
  bool use_score_split = true;

  friend bool operator==(const AblationToggles&,
                         const AblationToggles&) = default;
};

struct TrackerConfig {
  std::array<GroupConfig, 3> groups;
  AblationToggles ablation;

  GroupConfig& group(ClassGroup g) { return groups[static_cast<int>(g)]; }
  const GroupConfig& group(ClassGroup g) const {
    return groups[static_cast<int>(g)];
  }

  // Tuned tables: split / high / low / min_hits / max_age / death_age per
  // group plus the Kalman tables from params_for_group().
  static TrackerConfig defaults();

  // Throws ConfigError on death_age <= max_age, thresholds out of range, or
  // non-positive min_hits.
  void validate() const;
};

struct SplitDetections {
  std::vector<Box3D> high;
  std::vector<Box3D> low;
};

// score >= threshold goes to `high`; input order kept in both lists.
SplitDetections split_detections(const std::vector<Box3D>& dets,
                                 double threshold);

// Applies each detection's group z offset; drops Stuff boxes. A height that
// the correction would push to or below zero is clamped to kMinDimension.
std::vector<Box3D> prepare_detections(const std::vector<Box3D>& raw,
                                      const TrackerConfig& config);

struct TrackOutput {
  ClassGroup group;
  TrackId track_id;
  ClassId class_id;  // majority class of the tracklet
  Box3D box;

  friend bool operator==(const TrackOutput&, const TrackOutput&) = default;
};

class Tracker {
 public:
  explicit Tracker(TrackerConfig config);

  // Runs one frame. Detections must already be in the tracking frame with
  // offsets applied (see prepare_detections). Returns active tracklets
  // ordered by (group, track_id).
  std::vector<TrackOutput> step(const std::vector<Box3D>& frame_dets);

  const std::vector<Tracklet>& tracklets(ClassGroup g) const {
    return tracklets_[static_cast<int>(g)];
  }
  const TrackerConfig& config() const { return config_; }
  int frame_index() const { return frame_; }

 private:
  void step_group(ClassGroup g, std::vector<Box3D> dets);

  TrackerConfig config_;
  std::array<MotionModel, 3> models_;
  std::array<std::vector<Tracklet>, 3> tracklets_;
  std::array<TrackId, 3> next_id_{1, 1, 1};
  int frame_ = 0;
};

using SequenceTracks = std::vector<std::vector<TrackOutput>>;

SequenceTracks run_sequence(std::span<const std::vector<Box3D>> frames,
                            const TrackerConfig& config);

// Pull-style variant: `next_frame` returns std::nullopt at end of sequence.
// Exceptions from the source propagate unchanged.
SequenceTracks run_sequence(
    const std::function<std::optional<std::vector<Box3D>>()>& next_frame,
    const TrackerConfig& config);

}  // namespace panotrack

#endif  // PANOTRACK_TRACKER_HPP_
