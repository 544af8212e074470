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

#ifndef PANOTRACK_ASSOCIATION_HPP_
#define PANOTRACK_ASSOCIATION_HPP_

#include <cstddef>
#include <vector>

#include "panotrack/assignment.hpp"
#include "panotrack/geometry.hpp"
#include "panotrack/tracklet.hpp"

namespace panotrack {

struct AssociationProblem {
  std::vector<Box3D> detections;   // M rows
  std::vector<Box3D> predictions;  // N columns
  Matrix affinity;                 // affinity(i, j) = sim(d_i, t_j)
  double threshold = 0.0;
};

// Fills the affinity matrix with `metric` and validates the threshold.
AssociationProblem make_problem(std::vector<Box3D> detections,
                                std::vector<Box3D> predictions,
                                double threshold,
                                SimilarityMetric metric = SimilarityMetric::kDiou);

struct Match {
  std::size_t detection;
  std::size_t tracklet;
  double similarity;

  friend bool operator==(const Match&, const Match&) = default;
};

struct AssociationResult {
  std::vector<Match> matches;
  std::vector<std::size_t> unmatched_detections;
  std::vector<std::size_t> unmatched_tracklets;
};

// Hungarian matching, then removal of pairs below the threshold. Removed
// pairs release both indices to the unmatched lists. All lists ascending.
AssociationResult associate(const AssociationProblem& problem);

struct Thresholds {
  double high = 0.0;
  double low = 0.0;
};

// A tracklet that received a detection inside a base block.
struct MatchedTracklet {
  Tracklet tracklet;       // already corrected with `detection`
  Box3D detection;
  double similarity = 0.0;
  bool low_score_pass = false;
};

// The four output ports of one base block.
struct BaseBlockOutput {
  std::vector<Box3D> unmatched_high;       // OUT1
  std::vector<Box3D> unmatched_low;        // OUT2
  std::vector<MatchedTracklet> matched;    // OUT3
  std::vector<Tracklet> unmatched;         // OUT4
};

// Two-pass association over tracklets whose states are already predicted for
// the current frame: high-score detections against all tracklets at
// `thresholds.high`, then low-score detections against the leftovers at
// `thresholds.low`. Matched tracklets are corrected with their detection.
// Unmatched high detections never enter the second pass.
BaseBlockOutput base_block(const std::vector<Box3D>& high_dets,
                           const std::vector<Box3D>& low_dets,
                           std::vector<Tracklet> tracklets,
                           Thresholds thresholds, const MotionModel& model,
                           SimilarityMetric metric = SimilarityMetric::kDiou);

}  // namespace panotrack

#endif  // PANOTRACK_ASSOCIATION_HPP_
