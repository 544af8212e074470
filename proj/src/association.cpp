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

#include "panotrack/association.hpp"

#include <sstream>
#include <utility>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

std::vector<Box3D> predicted_boxes(const std::vector<Tracklet>& tracklets) {
  std::vector<Box3D> boxes;
  boxes.reserve(tracklets.size());
  for (const Tracklet& t : tracklets) boxes.push_back(t.box());
  return boxes;
}

}  // namespace

AssociationProblem make_problem(std::vector<Box3D> detections,
                                std::vector<Box3D> predictions,
                                double threshold, SimilarityMetric metric) {
  if (!(threshold > -1.0 && threshold <= 1.0)) {
    std::ostringstream msg;
    msg << "matching threshold " << threshold << " outside (-1, 1]";
    throw ConfigError(msg.str());
  }
  AssociationProblem p;
  p.affinity = Matrix(detections.size(), predictions.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    for (std::size_t j = 0; j < predictions.size(); ++j) {
      p.affinity(i, j) = similarity(metric, detections[i], predictions[j]);
    }
  }
  p.detections = std::move(detections);
  p.predictions = std::move(predictions);
  p.threshold = threshold;
  return p;
}

AssociationResult associate(const AssociationProblem& problem) {
  const std::size_t m = problem.affinity.rows();
  const std::size_t n = problem.affinity.cols();
  std::vector<char> det_used(m, 0), trk_used(n, 0);

  AssociationResult result;
  for (const auto& [row, col] : solve_assignment(problem.affinity)) {
    const double s = problem.affinity(row, col);
    if (s < problem.threshold) continue;
    result.matches.push_back({row, col, s});
    det_used[row] = 1;
    trk_used[col] = 1;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!det_used[i]) result.unmatched_detections.push_back(i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!trk_used[j]) result.unmatched_tracklets.push_back(j);
  }
  return result;
}

BaseBlockOutput base_block(const std::vector<Box3D>& high_dets,
                           const std::vector<Box3D>& low_dets,
                           std::vector<Tracklet> tracklets,
                           Thresholds thresholds, const MotionModel& model,
                           SimilarityMetric metric) {
  BaseBlockOutput out;

  // Pass 1: high-score detections against every input tracklet.
  const AssociationResult first = associate(
      make_problem(high_dets, predicted_boxes(tracklets), thresholds.high, metric));
  for (const Match& m : first.matches) {
    Tracklet t = tracklets[m.tracklet];
    t.on_match(high_dets[m.detection], model);
    out.matched.push_back({std::move(t), high_dets[m.detection], m.similarity,
                           false});
  }
  for (std::size_t i : first.unmatched_detections) {
    out.unmatched_high.push_back(high_dets[i]);
  }

  // Pass 2: low-score detections against the pass-1 leftovers only.
  std::vector<Tracklet> leftovers;
  leftovers.reserve(first.unmatched_tracklets.size());
  for (std::size_t j : first.unmatched_tracklets) {
    leftovers.push_back(std::move(tracklets[j]));
  }
  const AssociationResult second = associate(
      make_problem(low_dets, predicted_boxes(leftovers), thresholds.low, metric));
  for (const Match& m : second.matches) {
    Tracklet t = leftovers[m.tracklet];
    t.on_match(low_dets[m.detection], model);
    out.matched.push_back({std::move(t), low_dets[m.detection], m.similarity,
                           true});
  }
  for (std::size_t i : second.unmatched_detections) {
    out.unmatched_low.push_back(low_dets[i]);
  }
  for (std::size_t j : second.unmatched_tracklets) {
    out.unmatched.push_back(std::move(leftovers[j]));
  }
  return out;
}

}  // namespace panotrack
