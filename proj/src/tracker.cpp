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

#include "panotrack/tracker.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

GroupConfig make_group(double split, double high, double low, int min_hits,
                       int max_age, int death_age, ClassGroup g) {
  GroupConfig c;
  c.det_split_threshold = split;
  c.high_match_threshold = high;
  c.low_match_threshold = low;
  c.min_hits = min_hits;
  c.max_age = max_age;
  c.death_age = death_age;
  c.kalman = params_for_group(g);
  return c;
}

void require(bool ok, ClassGroup g, const std::string& what) {
  if (!ok) {
    throw ConfigError(std::string(group_name(g)) + ": " + what);
  }
}

bool by_id(const Tracklet& a, const Tracklet& b) {
  return a.track_id < b.track_id;
}

}  // namespace

TrackerConfig TrackerConfig::defaults() {
  TrackerConfig c;
  c.group(ClassGroup::kVehicles) =
      make_group(0.7, -0.2, -0.5, 2, 7, 10, ClassGroup::kVehicles);
  c.group(ClassGroup::kBikes) =
      make_group(0.8, -0.4, -0.7, 3, 4, 7, ClassGroup::kBikes);
  c.group(ClassGroup::kPedestrian) =
      make_group(0.3, -0.4, -0.7, 3, 4, 7, ClassGroup::kPedestrian);
  return c;
}

void TrackerConfig::validate() const {
  for (ClassGroup g : kAllGroups) {
    const GroupConfig& c = group(g);
    require(c.det_split_threshold >= 0.0 && c.det_split_threshold <= 1.0, g,
            "det_split_threshold must lie in [0, 1]");
    require(c.high_match_threshold > -1.0 && c.high_match_threshold <= 1.0, g,
            "high_match_threshold must lie in (-1, 1]");
    require(c.low_match_threshold > -1.0 && c.low_match_threshold <= 1.0, g,
            "low_match_threshold must lie in (-1, 1]");
    require(c.min_hits >= 1, g, "min_hits must be at least 1");
    require(c.max_age >= 0, g, "max_age must be non-negative");
    require(c.death_age > c.max_age, g, "death_age must exceed max_age");
  }
}

SplitDetections split_detections(const std::vector<Box3D>& dets,
                                 double threshold) {
  SplitDetections out;
  for (const Box3D& d : dets) {
    (d.score >= threshold ? out.high : out.low).push_back(d);
  }
  return out;
}

std::vector<Box3D> prepare_detections(const std::vector<Box3D>& raw,
                                      const TrackerConfig& config) {
  std::vector<Box3D> out;
  out.reserve(raw.size());
  for (const Box3D& d : raw) {
    const auto g = group_of(d.class_id);
    if (!g) continue;
    const ZOffset& off = config.group(*g).kalman.z_offset;
    Box3D b = d;
    b.cz += off.cz;
    b.h = std::max(b.h + off.h, kMinDimension);
    out.push_back(b);
  }
  return out;
}

Tracker::Tracker(TrackerConfig config) : config_(std::move(config)) {
  config_.validate();
  for (ClassGroup g : kAllGroups) {
    models_[static_cast<int>(g)] =
        MotionModel{config_.group(g).kalman, config_.ablation.use_kalman};
  }
}

std::vector<TrackOutput> Tracker::step(const std::vector<Box3D>& frame_dets) {
  std::array<std::vector<Box3D>, 3> per_group;
  for (const Box3D& d : frame_dets) {
    validate_box(d);
    if (const auto g = group_of(d.class_id)) {
      per_group[static_cast<int>(*g)].push_back(d);
    }
  }
  for (ClassGroup g : kAllGroups) {
    step_group(g, std::move(per_group[static_cast<int>(g)]));
  }
  ++frame_;

  std::vector<TrackOutput> out;
  for (ClassGroup g : kAllGroups) {
    for (const Tracklet& t : tracklets(g)) {
      if (t.lifecycle != Lifecycle::kActive) continue;
      const Box3D box = t.box();
      out.push_back({g, t.track_id, box.class_id, box});
    }
  }
  return out;
}

void Tracker::step_group(ClassGroup g, std::vector<Box3D> dets) {
  const int gi = static_cast<int>(g);
  const GroupConfig& gc = config_.group(g);
  const AblationToggles& ab = config_.ablation;
  const MotionModel& model = models_[gi];
  const Thresholds thresholds{gc.high_match_threshold, gc.low_match_threshold};

  SplitDetections split;
  if (ab.use_score_split) {
    split = split_detections(dets, gc.det_split_threshold);
  } else {
    split.high = std::move(dets);
  }

  std::vector<Tracklet> actives, candidates;
  for (Tracklet& t : tracklets_[gi]) {
    t.predict(model);
    (t.lifecycle == Lifecycle::kActive ? actives : candidates)
        .push_back(std::move(t));
  }

  BaseBlockOutput active_block =
      base_block(split.high, split.low, std::move(actives), thresholds, model,
                 ab.matching_metric);
  BaseBlockOutput candidate_block =
      base_block(active_block.unmatched_high, active_block.unmatched_low,
                 std::move(candidates), thresholds, model, ab.matching_metric);

  std::vector<Tracklet> next;

  // Active To Candidate.
  for (MatchedTracklet& m : active_block.matched) {
    next.push_back(std::move(m.tracklet));
  }
  for (Tracklet& t : active_block.unmatched) {
    t.on_miss();
    if (t.time_since_update > gc.max_age) {
      if (!ab.use_candidate_state) continue;  // no fallback state: terminate
      t.lifecycle = Lifecycle::kCandidate;
      t.hit_streak = 0;
    }
    next.push_back(std::move(t));
  }

  // Candidate To Active.
  for (MatchedTracklet& m : candidate_block.matched) {
    Tracklet& t = m.tracklet;
    if (t.hit_streak >= gc.min_hits && t.time_since_update < gc.max_age) {
      t.lifecycle = Lifecycle::kActive;
    }
    next.push_back(std::move(t));
  }

  // Death Management.
  for (Tracklet& t : candidate_block.unmatched) {
    t.on_miss();
    if (t.time_since_update > gc.death_age) continue;
    next.push_back(std::move(t));
  }

  // Birth Management: unmatched low-score detections are discarded.
  for (const Box3D& d : candidate_block.unmatched_high) {
    Tracklet t = Tracklet::born(next_id_[gi]++, g, d, model);
    if (!ab.use_candidate_state || t.hit_streak >= gc.min_hits) {
      t.lifecycle = Lifecycle::kActive;
    }
    next.push_back(std::move(t));
  }

  std::sort(next.begin(), next.end(), by_id);
  tracklets_[gi] = std::move(next);
}

SequenceTracks run_sequence(std::span<const std::vector<Box3D>> frames,
                            const TrackerConfig& config) {
  Tracker tracker(config);
  SequenceTracks out;
  out.reserve(frames.size());
  for (const auto& dets : frames) out.push_back(tracker.step(dets));
  return out;
}

SequenceTracks run_sequence(
    const std::function<std::optional<std::vector<Box3D>>()>& next_frame,
    const TrackerConfig& config) {
  Tracker tracker(config);
  SequenceTracks out;
  while (auto dets = next_frame()) out.push_back(tracker.step(*dets));
  return out;
}

}  // namespace panotrack
